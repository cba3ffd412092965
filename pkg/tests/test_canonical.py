import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from luequiv.canonical import (
    general_sc_equivalent,
    pure_sc_equivalent,
    sc_lu_equivalent,
    sc_lu_witness,
    sc_min_pt_eigenvalue,
    sc_separable,
    standard_form_2q,
    standard_form_general,
    theorem2_family,
    witness_residual,
)
from luequiv.states import SCCoefficients, random_sc, sc_embed
from luequiv.verify import transformed_entries

from .strategies import random_sc_states, sc2q, seeds


def _family(sc, delta, swap):
    c2 = sc.c2 * np.exp(1j * delta)
    return SCCoefficients.two_qubit(sc.c4, c2, sc.c1) if swap else SCCoefficients.two_qubit(sc.c1, c2, sc.c4)


def test_standard_form_example():
    sc = SCCoefficients.two_qubit(0.3, 0.2 * np.exp(1j * np.pi / 3), 0.7)
    form = standard_form_2q(sc)
    assert_allclose(form.as_tuple(), (0.7, 0.2, 0.3), atol=1e-15)
    assert form.swapped
    assert witness_residual(sc, form.coefficients(), form.witness) < 1e-12


def test_standard_form_phase_branch():
    sc = SCCoefficients.two_qubit(0.6, 0.1j, 0.4)
    form = standard_form_2q(sc)
    assert not form.swapped
    assert_allclose(form.witness[1], np.eye(2))
    assert_allclose(form.witness[0], np.diag([-1j, 1]), atol=1e-15)


@given(sc2q())
def test_standard_form_properties(sc):
    form = standard_form_2q(sc)
    l1, l2, l4 = form.as_tuple()
    assert l1 >= l4 and l2 >= 0
    assert l1 * l4 >= l2**2 - 1e-12
    assert witness_residual(sc, form.coefficients(), form.witness) < 1e-12
    again = standard_form_2q(form.coefficients())
    assert_allclose(again.as_tuple(), form.as_tuple(), atol=1e-15)


@given(sc2q(), st.floats(0, 2 * np.pi), st.booleans())
def test_family_members_are_equivalent(sc, delta, swap):
    other = _family(sc, delta, swap)
    assert theorem2_family(sc, other)
    assert sc_lu_equivalent(sc, other)
    assert witness_residual(sc, other, sc_lu_witness(sc, other)) < 1e-12


@given(sc2q(), st.floats(0.05, 0.3))
def test_changed_modulus_is_not_equivalent(sc, shrink):
    if abs(sc.c2) < 1e-3:
        return
    other = SCCoefficients.two_qubit(sc.c1, sc.c2 * (1 - shrink), sc.c4)
    assert not sc_lu_equivalent(sc, other)
    assert not theorem2_family(sc, other)


def test_rejects_non_two_qubit():
    with pytest.raises(ValueError):
        standard_form_2q(random_sc(0, 3))


@given(sc2q(), seeds)
def test_transformed_entries_formula(sc, seed):
    from luequiv.states import LocalUnitary2, conjugate_by_locals

    u = LocalUnitary2.random(seed)
    direct = conjugate_by_locals(sc_embed(sc), u).mat
    assert_allclose(transformed_entries(sc.c1, sc.c2, sc.c4, u.a1, u.a2, u.b1, u.b2), direct, atol=1e-12)


def test_pure_sc_equivalence():
    a0, a1 = np.sqrt(0.8), np.sqrt(0.2)
    assert pure_sc_equivalent(a0, a1, a0, a1)
    assert not pure_sc_equivalent(a0, a1, np.sqrt(0.7), np.sqrt(0.3))
    with pytest.raises(ValueError, match="a0 >= a1"):
        pure_sc_equivalent(a1, a0, a0, a1)
    with pytest.raises(ValueError, match="normalised"):
        pure_sc_equivalent(0.9, 0.1, a0, a1)


@given(sc2q())
def test_separable_iff_ppt(sc):
    lam = sc_min_pt_eigenvalue(sc)
    assert sc_separable(sc) == (lam >= -1e-10)
    # the partial transpose of an SC state has -|c2| as its smallest eigenvalue
    assert lam == pytest.approx(min(-abs(sc.c2), min(sc.c1, sc.c4)), abs=1e-12)


def test_multipartite_separability():
    sc = random_sc(3, 3, 3)
    assert not sc_separable(sc)
    assert sc_min_pt_eigenvalue(sc) < 0
    assert sc_separable(SCCoefficients(np.diag([0.5, 0.3, 0.2]).astype(complex), 3))


def test_general_form_example():
    c = np.array([[0.5, 0.1 * np.exp(0.4j), 0.1 * np.exp(1.1j)],
                  [0.1 * np.exp(-0.4j), 0.3, 0.05 * np.exp(0.9j)],
                  [0.1 * np.exp(-1.1j), 0.05 * np.exp(-0.9j), 0.2]])
    form = standard_form_general(SCCoefficients(c))
    assert form.permutation == (0, 1, 2)
    # arg c12 - arg c02 + arg c01 = 0.9 - 1.1 + 0.4
    assert form.residual_phases[1, 2] == pytest.approx(0.2)
    assert_allclose(np.abs(form.canonical.c), np.abs(c), atol=1e-15)
    assert np.all(np.abs(form.canonical.c[0].imag) < 1e-15)


@given(random_sc_states(3, 2), seeds)
def test_general_form_witness_and_invariance(sc, seed):
    rng = np.random.default_rng(seed)
    form = standard_form_general(sc)
    diag = np.real(np.diag(form.canonical.c))
    assert np.all(np.diff(diag) <= 1e-12)
    assert witness_residual(sc, form.canonical, form.witness) < 1e-12
    perm = rng.permutation(3)
    ph = np.exp(1j * rng.uniform(0, 2 * np.pi, 3))
    moved = SCCoefficients((ph[:, None] * sc.c * ph.conj()[None, :])[np.ix_(perm, perm)])
    assert general_sc_equivalent(sc, moved)


def test_general_form_multipartite():
    sc = random_sc(11, 3, 3)
    form = standard_form_general(sc)
    assert witness_residual(sc, form.canonical, form.witness) < 1e-12
    assert not general_sc_equivalent(sc, random_sc(12, 3, 3))
    assert not general_sc_equivalent(sc, random_sc(12, 3, 2))


def test_general_form_matches_two_qubit_form():
    for seed in range(30):
        sc = random_sc(seed)
        general = standard_form_general(sc).canonical
        assert_allclose([general.c1, abs(general.c2), general.c4], standard_form_2q(sc).as_tuple(), atol=1e-12)
