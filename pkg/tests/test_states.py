import numpy as np
import pytest
from hypothesis import given
from numpy.testing import assert_allclose

from luequiv.exceptions import DimensionMismatch, NotHermitian, NotNormalized, NotPSD, TraceNotOne
from luequiv.states import (
    DensityMatrix,
    LocalUnitary2,
    PureState,
    SCCoefficients,
    bell_density,
    conjugate_by_locals,
    haar_unitary,
    random_density,
    random_pure_state,
    random_sc,
    sc_embed,
    validate_density,
)

from .strategies import sc2q, seeds


def test_two_qubit_example():
    sc = SCCoefficients.two_qubit(0.7, 0.2, 0.3)
    assert (sc.c1, sc.c2, sc.c4) == (0.7, 0.2, 0.3)
    assert sc.is_two_qubit and sc.levels == 2


def test_psd_violation_reports_gap():
    with pytest.raises(NotPSD) as err:
        SCCoefficients.two_qubit(0.5, 0.6, 0.5)
    assert err.value.invariant == "psd"
    assert "0.11" in str(err.value)


@pytest.mark.parametrize(
    "c, exc",
    [
        (np.array([[0.5, 0.1], [0.2, 0.5]]), NotHermitian),
        (np.array([[0.6, 0.0], [0.0, 0.6]]), TraceNotOne),
        (np.array([[1.2, 0.0], [0.0, -0.2]]), NotPSD),
    ],
)
def test_sc_validation_errors(c, exc):
    with pytest.raises(exc):
        SCCoefficients(c)


def test_coefficients_are_read_only():
    sc = random_sc(1)
    with pytest.raises(ValueError):
        sc.c[0, 0] = 2.0


def test_pure_state_normalisation():
    with pytest.raises(NotNormalized):
        PureState(np.ones((2, 2)))
    psi = PureState.from_vector(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
    assert_allclose(psi.density().mat, bell_density().mat)


def test_local_unitary_parametrisation():
    with pytest.raises(NotNormalized):
        LocalUnitary2(1.0, 1.0, 1.0, 0.0)
    u = LocalUnitary2.random(3)
    for f in u.factors():
        assert_allclose(f @ f.conj().T, np.eye(2), atol=1e-14)
    assert_allclose(u.u1, [[u.a1, -u.a2], [np.conj(u.a2), np.conj(u.a1)]])


def test_validate_density():
    rho = validate_density(bell_density().mat, (2, 2))
    assert isinstance(rho, DensityMatrix)
    with pytest.raises(TraceNotOne):
        validate_density(np.eye(4), (2, 2))
    with pytest.raises(DimensionMismatch):
        validate_density(np.eye(4) / 4, (2, 3))


@given(sc2q())
def test_sc_embed_layout(sc):
    rho = sc_embed(sc).mat
    assert rho[0, 0] == sc.c1 and rho[3, 3] == sc.c4
    assert rho[0, 3] == sc.c2 and rho[3, 0] == np.conj(sc.c2)
    assert np.count_nonzero(rho) <= 4


def test_sc_embed_multipartite_stride():
    sc = random_sc(5, n_levels=3, parties=3)
    rho = sc_embed(sc)
    assert rho.mat.shape == (27, 27)
    idx = [0, 13, 26]
    assert_allclose(rho.mat[np.ix_(idx, idx)], sc.c)
    assert np.trace(rho.mat).real == pytest.approx(1.0)


@given(seeds)
def test_haar_unitary(seed):
    for d in (1, 2, 3, 5):
        u = haar_unitary(d, seed)
        assert_allclose(u @ u.conj().T, np.eye(d), atol=1e-12)


def test_haar_first_moment():
    rng = np.random.default_rng(0)
    vals = [abs(haar_unitary(3, rng)[0, 0]) ** 2 for _ in range(6000)]
    # E|U_00|^2 = 1/d
    assert np.mean(vals) == pytest.approx(1 / 3, abs=0.015)


def test_seeded_generators_are_reproducible():
    assert_allclose(random_sc(7).c, random_sc(7).c)
    assert_allclose(random_density(4, 7).mat, random_density(4, 7).mat)
    assert_allclose(random_pure_state((2, 3), 7).coeffs, random_pure_state((2, 3), 7).coeffs)


def test_random_sc_covers_pure_and_mixed():
    ranks = {np.linalg.matrix_rank(random_sc(s).c, tol=1e-10) for s in range(40)}
    assert ranks == {1, 2}


@given(sc2q(), seeds)
def test_conjugation_preserves_spectrum(sc, seed):
    rho = sc_embed(sc)
    moved = conjugate_by_locals(rho, LocalUnitary2.random(seed))
    assert_allclose(np.linalg.eigvalsh(moved.mat), np.linalg.eigvalsh(rho.mat), atol=1e-12)


def test_conjugation_dimension_check():
    with pytest.raises(DimensionMismatch):
        conjugate_by_locals(bell_density(), [np.eye(3), np.eye(2)])
