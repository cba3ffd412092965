import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from luequiv.exceptions import DimensionMismatch
from luequiv.invariants import (
    invariant_criterion,
    invariants_I,
    pure_lu_equivalent,
    pure_lu_witness,
    representation_of,
    schmidt_criterion,
    schmidt_decompose,
)
from luequiv.states import PureState, bell_density, haar_unitary, random_density, random_pure_state

from .strategies import seeds


def test_schmidt_of_product_and_bell():
    prod = PureState(np.outer([1, 0], [0, 1]).astype(complex))
    assert schmidt_decompose(prod).rank == 1
    bell = PureState(np.eye(2) / np.sqrt(2))
    assert_allclose(schmidt_decompose(bell).coefficients, [2**-0.5, 2**-0.5])


@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 4)]))
def test_schmidt_reconstructs(seed, dims):
    psi = random_pure_state(dims, seed)
    sd = schmidt_decompose(psi)
    assert_allclose(sd.reconstruct(), psi.coeffs, atol=1e-12)
    assert_allclose(sd.left_basis.conj().T @ sd.left_basis, np.eye(sd.rank), atol=1e-12)
    assert_allclose(sd.right_basis.conj().T @ sd.right_basis, np.eye(sd.rank), atol=1e-12)


def test_invariants_known_values():
    bell = PureState(np.eye(2) / np.sqrt(2))
    assert_allclose(invariants_I(bell), [1.0, 0.5])
    ghz_like = PureState(np.eye(3) / np.sqrt(3))
    assert_allclose(invariants_I(ghz_like), [1.0, 1 / 3, 1 / 9])
    assert len(invariants_I(ghz_like, max_alpha=5)) == 5
    with pytest.raises(ValueError):
        invariants_I(bell, max_alpha=0)


@given(seeds, st.sampled_from([2, 3, 4]))
def test_invariants_constant_on_orbit(seed, n):
    rng = np.random.default_rng(seed)
    psi = random_pure_state((n, n), rng)
    w = np.kron(haar_unitary(n, rng), haar_unitary(n, rng))
    phi = PureState.from_vector(w @ psi.vector, (n, n))
    assert_allclose(invariants_I(phi), invariants_I(psi), atol=1e-10)
    assert pure_lu_equivalent(psi, phi)
    u1, u2 = pure_lu_witness(psi, phi)
    assert_allclose(np.kron(u1, u2) @ psi.vector, phi.vector, atol=1e-10)


def test_distinct_spectra_not_equivalent(rng):
    for _ in range(50):
        psi, phi = random_pure_state((3, 3), rng), random_pure_state((3, 3), rng)
        assert not pure_lu_equivalent(psi, phi)


def test_criteria_agree_and_dims_checked(rng):
    psi = random_pure_state((2, 3), rng)
    assert schmidt_criterion(psi, psi) and invariant_criterion(psi, psi)
    with pytest.raises(DimensionMismatch):
        pure_lu_equivalent(psi, random_pure_state((3, 2), rng))


def test_boundary_pair_warns():
    # Schmidt gap just above tol while the I_alpha gap stays under its bound
    mu = np.array([np.sqrt(0.6), np.sqrt(0.4)])
    nu = mu + np.array([1.5e-8, -1.5e-8 * mu[0] / mu[1]])
    nu /= np.linalg.norm(nu)
    a = PureState(np.diag(mu).astype(complex))
    b = PureState(np.diag(nu).astype(complex))
    assert not schmidt_criterion(a, b) and invariant_criterion(a, b)
    with pytest.warns(RuntimeWarning):
        assert not pure_lu_equivalent(a, b)


def test_representation_reconstructs(rng):
    for rank in (1, 2, 4, 6):
        rho = random_density(6, rng, rank=rank, dims=(2, 3))
        rep = representation_of(rho)
        assert len(rep.records) == rank
        assert_allclose(rep.reconstruct(), rho.mat, atol=1e-10)
        assert np.all(np.diff(rep.eigenvalues()) <= 0)
        for r in rep.records:
            assert_allclose(r.schmidt.reconstruct().ravel(), r.eigenvector, atol=1e-10)


def test_representation_degeneracy_flags():
    bell = representation_of(bell_density())
    assert not bell.degenerate and bell.schmidt_degenerate
    from luequiv.states import DensityMatrix

    mixed = representation_of(DensityMatrix(np.eye(4) / 4, (2, 2)))
    assert mixed.degenerate
