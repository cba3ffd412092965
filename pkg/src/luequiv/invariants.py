"""Pure-state LU invariants and the spectral/Schmidt representation of mixed states."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch
from .states import DensityMatrix, PureState

ZERO_TOL = 1e-10
DEGENERACY_GAP = 1e-8


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """``psi = sum_j coefficients[j] * left_basis[:, j] ⊗ right_basis[:, j]``."""

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def reconstruct(self) -> np.ndarray:
        """Coefficient matrix rebuilt from the decomposition."""
        return (self.left_basis * self.coefficients) @ self.right_basis.T


@dataclass(frozen=True, eq=False)
class RepresentationRecord:
    eigenvalue: float
    eigenvector: np.ndarray
    schmidt: SchmidtData
    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True, eq=False)
class Representation:
    """Per-eigenvector Schmidt data expressed in reference local bases.

    The reference bases extend the Schmidt bases of the leading eigenvector.
    Nothing canonical is attempted under degeneracy: ``degenerate`` flags
    repeated eigenvalues, ``schmidt_degenerate`` repeated Schmidt
    coefficients within an eigenvector (non-unique Schmidt bases).
    """

    records: tuple
    reference_a: np.ndarray
    reference_b: np.ndarray
    degenerate: bool
    schmidt_degenerate: bool = False

    def eigenvalues(self) -> np.ndarray:
        return np.array([r.eigenvalue for r in self.records])

    def reconstruct(self) -> np.ndarray:
        """Rebuild ``rho`` from the records (Schmidt vectors taken from X_i, Y_i)."""
        m, n = self.reference_a.shape[0], self.reference_b.shape[0]
        rho = np.zeros((m * n, m * n), dtype=complex)
        for rec in self.records:
            a = self.reference_a @ rec.x
            b = self.reference_b @ rec.y
            v = ((a * rec.schmidt.coefficients) @ b.T).reshape(-1)
            rho += rec.eigenvalue * np.outer(v, v.conj())
        return rho


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its first non-negligible entry is real positive."""
    nz = np.flatnonzero(np.abs(v) > 1e-12 * max(np.abs(v).max(), 1e-300))
    if nz.size == 0:
        return v
    p = v[nz[0]]
    return v * (abs(p) / p)


def schmidt_decompose(psi: PureState, tol: float = ZERO_TOL) -> SchmidtData:
    """Schmidt decomposition via the SVD of the coefficient matrix."""
    a = psi.coeffs if isinstance(psi, PureState) else np.asarray(psi, dtype=complex)
    u, s, vh = np.linalg.svd(a)
    k = int(np.sum(s > tol))
    return SchmidtData(s[:k].copy(), u[:, :k].copy(), vh[:k, :].T.copy())


def invariants_I(psi: PureState, max_alpha: int | None = None) -> np.ndarray:
    """``I_alpha = tr (A A^dag)^alpha`` for ``alpha = 1..max_alpha``.

    ``max_alpha`` defaults to the smaller local dimension, enough to fix the
    Schmidt spectrum.
    """
    a = psi.coeffs
    if max_alpha is None:
        max_alpha = min(a.shape)
    if max_alpha < 1:
        raise ValueError("max_alpha must be >= 1")
    p = np.linalg.svd(a, compute_uv=False) ** 2
    return np.array([np.sum(p**alpha) for alpha in range(1, max_alpha + 1)])


def _padded_spectrum(psi: PureState, size: int) -> np.ndarray:
    s = np.linalg.svd(psi.coeffs, compute_uv=False)
    return np.pad(s, (0, size - len(s)))


def schmidt_criterion(psi: PureState, phi: PureState, tol: float = 1e-8) -> bool:
    size = min(psi.coeffs.shape)
    return bool(np.max(np.abs(_padded_spectrum(psi, size) - _padded_spectrum(phi, size))) < tol)


def invariant_criterion(psi: PureState, phi: PureState, tol: float = 1e-8) -> bool:
    """Compare ``I_alpha`` values.

    ``|delta I_alpha| <= 2 alpha * sum |delta mu|``, so ``2 alpha d tol`` is
    the matching threshold for a Schmidt tolerance ``tol``.
    """
    d = min(psi.coeffs.shape)
    ia, ib = invariants_I(psi, d), invariants_I(phi, d)
    bound = 2 * np.arange(1, d + 1) * d * tol
    return bool(np.all(np.abs(ia - ib) < bound))


def pure_lu_equivalent(psi: PureState, phi: PureState, tol: float = 1e-8) -> bool:
    """LU equivalence of bipartite pure states by their Schmidt spectra."""
    if psi.coeffs.shape != phi.coeffs.shape:
        raise DimensionMismatch(f"dims differ: {psi.coeffs.shape} vs {phi.coeffs.shape}")
    by_schmidt = schmidt_criterion(psi, phi, tol)
    if by_schmidt != invariant_criterion(psi, phi, tol):
        warnings.warn(
            "Schmidt-spectrum and I_alpha criteria disagree; the pair sits at the tolerance boundary",
            RuntimeWarning,
            stacklevel=2,
        )
    return by_schmidt


def pure_lu_witness(psi: PureState, phi: PureState) -> tuple[np.ndarray, np.ndarray]:
    """Local unitaries ``(U1, U2)`` with ``(U1 ⊗ U2) psi = phi`` when the spectra match."""
    u, _, vh = np.linalg.svd(psi.coeffs)
    u2, _, vh2 = np.linalg.svd(phi.coeffs)
    # U1 A U2^T = A' with A = U S Vh, A' = U' S Vh'
    return u2 @ u.conj().T, vh2.T @ vh.conj()


def _complete_basis(cols: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal columns to a full unitary by Gram-Schmidt against the identity."""
    basis = [c for c in cols.T]
    for e in np.eye(dim, dtype=complex):
        if len(basis) == dim:
            break
        v = e - sum(np.vdot(b, e) * b for b in basis)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            basis.append(v / norm)
    return np.column_stack(basis)


def representation_of(rho: DensityMatrix, tol: float = ZERO_TOL) -> Representation:
    """Spectral decomposition with each eigenvector Schmidt-decomposed.

    Eigenvectors are phase fixed (first nonzero amplitude real positive) and
    ordered by descending eigenvalue.
    """
    m, n = rho.bipartite
    w, q = np.linalg.eigh(rho.mat)
    order = np.argsort(-w, kind="stable")
    w, q = w[order], q[:, order]
    keep = w > tol
    w, q = w[keep], q[:, keep]
    gaps = np.abs(np.diff(w))
    degenerate = bool(np.any(gaps < DEGENERACY_GAP))

    vecs = [_fix_phase(q[:, i]) for i in range(len(w))]
    schmidts = [schmidt_decompose(v.reshape(m, n), tol) for v in vecs]
    schmidt_degenerate = any(np.any(np.abs(np.diff(s.coefficients)) < DEGENERACY_GAP) for s in schmidts)

    ref_a = _complete_basis(schmidts[0].left_basis, m)
    ref_b = _complete_basis(schmidts[0].right_basis, n)
    records = tuple(
        RepresentationRecord(
            eigenvalue=float(lam),
            eigenvector=v,
            schmidt=s,
            x=ref_a.conj().T @ s.left_basis,
            y=ref_b.conj().T @ s.right_basis,
        )
        for lam, v, s in zip(w, vecs, schmidts)
    )
    return Representation(records, ref_a, ref_b, degenerate, schmidt_degenerate)
