"""Closed-form LU classification of Schmidt-correlated (SC) states."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import partial_transpose
from .states import SCCoefficients, conjugate_by_locals, sc_embed

CANON_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class StandardForm2Q:
    """``lambda1|00><00| + lambda2(|00><11| + |11><00|) + lambda4|11><11|``.

    ``witness`` is the pair ``(U_A, U_B)`` taking the input state to this form.
    ``swapped`` records which construction was used (``U ⊗ U`` relabelling
    when ``c1 < c4``, else a phase on party A).
    """

    lambda1: float
    lambda2: float
    lambda4: float
    witness: tuple
    swapped: bool

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda4)

    def coefficients(self) -> SCCoefficients:
        return SCCoefficients.two_qubit(self.lambda1, self.lambda2, self.lambda4)


def _require_two_qubit(sc: SCCoefficients) -> None:
    if not isinstance(sc, SCCoefficients) or not sc.is_two_qubit:
        raise ValueError("a two-qubit SC state (2x2 coefficients, two parties) is required")


def standard_form_2q(sc: SCCoefficients) -> StandardForm2Q:
    """Standard form of a two-qubit SC state with its witness unitaries.

    Writing ``c2 = lambda2 e^{i theta}``: if ``c1 >= c4`` the witness is
    ``U ⊗ I`` with ``U = diag(e^{-i theta}, 1)``; otherwise ``U ⊗ U`` with
    ``U = e^{-i theta/2}|1><0| + |0><1|``, which also swaps the diagonal.
    """
    _require_two_qubit(sc)
    c1, c2, c4 = sc.c1, sc.c2, sc.c4
    lam2, theta = abs(c2), np.angle(c2)
    if c1 >= c4:
        u = np.diag([np.exp(-1j * theta), 1.0]).astype(complex)
        return StandardForm2Q(c1, lam2, c4, (u, np.eye(2, dtype=complex)), False)
    u = np.array([[0, 1], [np.exp(-0.5j * theta), 0]], dtype=complex)
    return StandardForm2Q(c4, lam2, c1, (u, u.copy()), True)


def sc_lu_equivalent(a: SCCoefficients, b: SCCoefficients, tol: float = CANON_TOL) -> bool:
    """Two two-qubit SC states are LU equivalent iff their standard forms coincide."""
    fa, fb = standard_form_2q(a), standard_form_2q(b)
    return bool(np.max(np.abs(np.subtract(fa.as_tuple(), fb.as_tuple()))) < tol)


def sc_lu_witness(a: SCCoefficients, b: SCCoefficients) -> tuple[np.ndarray, np.ndarray]:
    """Local unitaries mapping ``sc_embed(a)`` to ``sc_embed(b)`` through the common standard form."""
    wa, wb = standard_form_2q(a).witness, standard_form_2q(b).witness
    return tuple(ub.conj().T @ ua for ua, ub in zip(wa, wb))


def theorem2_family(rho: SCCoefficients, candidate: SCCoefficients, tol: float = CANON_TOL) -> bool:
    """Membership of ``candidate`` in ``{(c1, c2 e^{i d}, c4), (c4, c2 e^{i d}, c1)}``.

    Only the diagonal pair (ordered or swapped) and ``|c2|`` are compared; the
    off-diagonal phase is free.
    """
    _require_two_qubit(rho)
    _require_two_qubit(candidate)
    if abs(abs(rho.c2) - abs(candidate.c2)) >= tol:
        return False
    same = abs(rho.c1 - candidate.c1) < tol and abs(rho.c4 - candidate.c4) < tol
    swapped = abs(rho.c1 - candidate.c4) < tol and abs(rho.c4 - candidate.c1) < tol
    return bool(same or swapped)


def pure_sc_equivalent(a0: float, a1: float, b0: float, b1: float, tol: float = CANON_TOL) -> bool:
    """LU equivalence of ``a0|00> + a1|11>`` and ``b0|00> + b1|11>``.

    Both pairs must be sorted descending, non-negative and normalised.
    """
    for name, (x, y) in {"a": (a0, a1), "b": (b0, b1)}.items():
        if not (x >= y >= 0):
            raise ValueError(f"{name}-coefficients must satisfy {name}0 >= {name}1 >= 0, got ({x}, {y})")
        if abs(x * x + y * y - 1) > 1e-10:
            raise ValueError(f"{name}-coefficients are not normalised: {x}^2 + {y}^2 = {x * x + y * y}")
    return abs(a0 - b0) < tol and abs(a1 - b1) < tol


def sc_separable(sc: SCCoefficients, tol: float = 1e-10) -> bool:
    """PPT test specialised to SC states: separable iff every ``c_mn`` (m != n) vanishes."""
    c = sc.c
    off = c - np.diag(np.diag(c))
    return bool(np.max(np.abs(off)) <= tol)


def sc_min_pt_eigenvalue(sc: SCCoefficients) -> float:
    """Smallest eigenvalue of the partial transpose of the embedded state (first party vs rest)."""
    rho = sc_embed(sc)
    pt = partial_transpose(rho.mat, rho.bipartite, "B")
    return float(np.linalg.eigvalsh(pt).min())


@dataclass(frozen=True, eq=False)
class GeneralSCForm:
    """Gauge-fixed SC coefficients.

    ``canonical`` has a non-increasing diagonal and its gauge-tree entries
    (the first row whenever it has no zeros) real and non-negative.
    ``residual_phases[m, n]`` for ``1 <= m < n`` holds the phase that no
    diagonal local unitary can remove. ``witness`` lists one unitary per
    party; conjugating the input embedding by it gives the canonical one.
    """

    canonical: SCCoefficients
    residual_phases: np.ndarray
    permutation: tuple
    phases: np.ndarray
    witness: tuple

    def key(self, decimals: int = 8) -> tuple:
        c = self.canonical.c
        return (
            tuple(np.round(np.abs(c), decimals).ravel()),
            tuple(np.round(self.residual_phases, decimals).ravel()),
        )


def _gauge_phases(c: np.ndarray, tol: float) -> np.ndarray:
    """Spanning-forest gauge: tree edges made real non-negative, each root pinned to zero phase."""
    d = c.shape[0]
    psi = np.zeros(d)
    seen = np.zeros(d, dtype=bool)
    for root in range(d):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            p = queue.pop(0)
            for n in range(d):
                if not seen[n] and abs(c[p, n]) > tol:
                    seen[n] = True
                    # c'_pn = c_pn e^{i(psi_p - psi_n)} real positive
                    psi[n] = psi[p] + np.angle(c[p, n])
                    queue.append(n)
    return psi


def _wrap(phi):
    """Map angles into (-pi, pi]."""
    out = -((-np.asarray(phi) + np.pi) % (2 * np.pi) - np.pi)
    return out


def _gauge_fix(c: np.ndarray, perm: tuple, tol: float):
    cp = c[np.ix_(perm, perm)]
    psi = _gauge_phases(cp, tol)
    g = np.exp(1j * psi)
    canon = g[:, None] * cp * g.conj()[None, :]
    # snap numerically real tree entries
    canon = np.where(np.abs(canon.imag) < 1e-14 * max(1.0, np.abs(canon).max()), canon.real + 0j, canon)
    d = c.shape[0]
    res = np.zeros((d, d))
    for m in range(1, d):
        for n in range(m + 1, d):
            if abs(canon[m, n]) > tol:
                res[m, n] = _wrap(np.angle(canon[m, n]))
    return canon, res, psi


def standard_form_general(sc: SCCoefficients, tol: float = 1e-12) -> GeneralSCForm:
    """Canonical SC form for any number of levels and parties.

    A common relabelling on all parties sorts the diagonal in descending
    order; within tied diagonal entries every ordering is tried and the
    lexicographically largest gauge-fixed result (moduli, then residual
    phases) is kept. Diagonal phases applied to the first party then make the
    gauge-tree entries real and non-negative.
    """
    c = np.array(sc.c)
    d = sc.levels
    diag = np.real(np.diag(c))
    base = sorted(range(d), key=lambda i: -diag[i])
    # tie groups of the sorted diagonal
    groups, start = [], 0
    for i in range(1, d + 1):
        if i == d or abs(diag[base[i]] - diag[base[start]]) > CANON_TOL:
            groups.append(base[start:i])
            start = i
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = tuple(i for g in choice for i in g)
        canon, res, psi = _gauge_fix(c, perm, tol)
        key = (
            tuple(np.round(np.abs(canon), 10).ravel()),
            tuple(np.round(res, 10).ravel()),
        )
        if best is None or key > best[0]:
            best = (key, perm, canon, res, psi)
    _, perm, canon, res, psi = best

    p = np.zeros((d, d), dtype=complex)
    p[np.arange(d), perm] = 1.0
    witness = [p.copy() for _ in range(sc.parties)]
    witness[0] = np.diag(np.exp(1j * psi)) @ p
    canon = 0.5 * (canon + canon.conj().T)
    return GeneralSCForm(
        canonical=SCCoefficients(canon, sc.parties),
        residual_phases=res,
        permutation=perm,
        phases=psi,
        witness=tuple(witness),
    )


def general_sc_equivalent(a: SCCoefficients, b: SCCoefficients, tol: float = CANON_TOL) -> bool:
    """Sufficient test: equal canonical moduli and residual phases imply LU equivalence."""
    if a.c.shape != b.c.shape or a.parties != b.parties:
        return False
    fa, fb = standard_form_general(a), standard_form_general(b)
    if np.max(np.abs(np.abs(fa.canonical.c) - np.abs(fb.canonical.c))) >= tol:
        return False
    return bool(np.max(np.abs(_wrap(fa.residual_phases - fb.residual_phases))) < tol)


def witness_residual(sc: SCCoefficients, target: SCCoefficients, witness) -> float:
    """Frobenius distance between ``witness``-conjugated ``sc`` and ``target`` embeddings."""
    moved = conjugate_by_locals(sc_embed(sc), list(witness))
    return float(np.linalg.norm(moved.mat - sc_embed(target).mat))
