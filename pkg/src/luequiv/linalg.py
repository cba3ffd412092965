"""Dense complex linear algebra for small bipartite operators.

Conventions used everywhere in the package:

* composite index of ``|i>_A |k>_B`` is ``i * N + k`` (row-major);
* ``vec`` is row-major flattening, so ``realign(kron(A, B)) == outer(vec(A), vec(B))``;
* entropies default to base 2.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import DimensionMismatch

#: Eigenvalues / singular values below ``RANK_TOL * largest`` count as zero.
RANK_TOL = 1e-10


class BipartiteDims(NamedTuple):
    dim_a: int
    dim_b: int

    @property
    def total(self) -> int:
        return self.dim_a * self.dim_b


def as_dims(dims) -> BipartiteDims:
    if isinstance(dims, BipartiteDims):
        return dims
    m, n = dims
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise ValueError(f"dimensions must be positive, got {(m, n)}")
    return BipartiteDims(m, n)


def _check_bipartite(mat: np.ndarray, dims: BipartiteDims) -> None:
    size = dims.total
    if mat.shape != (size, size):
        raise DimensionMismatch(
            f"expected a {size}x{size} matrix for dims {tuple(dims)}, got {mat.shape}"
        )


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def vec(a) -> np.ndarray:
    """Row-major vectorisation."""
    return np.asarray(a).reshape(-1)


def realign(v, dims) -> np.ndarray:
    """Realignment (reshuffling) of an ``MN x MN`` operator.

    Row ``i*M + j`` of the result is the row-major ``vec`` of block ``(i, j)``
    of ``v``, giving an ``M^2 x N^2`` matrix. The operator is a tensor product
    exactly when the result has rank one.
    """
    v = np.asarray(v, dtype=complex)
    dims = as_dims(dims)
    _check_bipartite(v, dims)
    m, n = dims
    # v[i*N+k, j*N+l] -> t[i, k, j, l] -> out[(i, j), (k, l)]
    return v.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)


def partial_trace(rho, dims, which: str = "B") -> np.ndarray:
    """Trace out subsystem ``which`` (``"A"`` or ``"B"``)."""
    rho = np.asarray(rho, dtype=complex)
    dims = as_dims(dims)
    _check_bipartite(rho, dims)
    m, n = dims
    t = rho.reshape(m, n, m, n)
    if which == "B":
        return np.einsum("ikjk->ij", t)
    if which == "A":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def partial_transpose(rho, dims, which: str = "B") -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    dims = as_dims(dims)
    _check_bipartite(rho, dims)
    m, n = dims
    t = rho.reshape(m, n, m, n)
    if which == "B":
        t = t.transpose(0, 3, 2, 1)
    elif which == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"which must be 'A' or 'B', got {which!r}")
    return t.reshape(m * n, m * n)


def eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition with eigenvalues in descending order."""
    h = np.asarray(h, dtype=complex)
    h = 0.5 * (h + h.conj().T)
    w, q = np.linalg.eigh(h)
    return w[::-1], q[:, ::-1]


def numerical_rank(a, tol: float = RANK_TOL) -> int:
    s = np.linalg.svd(np.asarray(a), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def _entropy_from_probs(p: np.ndarray, log_base: float) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)) / np.log(log_base))


def shannon_entropy(probs, log_base: float = 2.0) -> float:
    """Shannon entropy with ``0 log 0 = 0``."""
    return _entropy_from_probs(np.asarray(probs, dtype=float), log_base)


def binary_entropy(p: float, log_base: float = 2.0) -> float:
    return shannon_entropy([p, 1.0 - p], log_base)


def _matrix(rho) -> np.ndarray:
    return np.asarray(getattr(rho, "mat", rho), dtype=complex)


def von_neumann_entropy(rho, log_base: float = 2.0) -> float:
    """``-tr(rho log rho)``; accepts a :class:`DensityMatrix` or a raw array."""
    w = np.linalg.eigvalsh(_matrix(rho))
    # clip round-off negatives; the result is never below zero
    return float(max(_entropy_from_probs(np.clip(w, 0.0, None), log_base), 0.0))


def relative_entropy(rho, sigma, log_base: float = 2.0) -> float:
    """Quantum relative entropy ``S(rho || sigma)``.

    Returns ``inf`` when the support of ``rho`` is not contained in the
    support of ``sigma``. Eigenvalues of ``sigma`` below ``RANK_TOL`` times
    its largest eigenvalue are treated as zero.
    """
    r = _matrix(rho)
    s = _matrix(sigma)
    if r.shape != s.shape:
        raise DimensionMismatch(f"shape mismatch {r.shape} vs {s.shape}")
    wr = np.linalg.eigvalsh(r)
    ws, qs = np.linalg.eigh(0.5 * (s + s.conj().T))
    cutoff = RANK_TOL * max(ws.max(), 0.0)
    # weight of rho on each eigenvector of sigma
    weights = np.real(np.einsum("ij,ik,kj->j", qs.conj(), r, qs))
    null = ws <= cutoff
    if np.any(weights[null] > RANK_TOL * max(wr.max(), 0.0) * 10):
        return float("inf")
    keep = ~null
    cross = float(np.sum(weights[keep] * np.log(ws[keep])))
    wr = np.clip(wr, 0.0, None)
    wr = wr[wr > 0]
    neg_entropy = float(np.sum(wr * np.log(wr)))
    return float(max((neg_entropy - cross) / np.log(log_base), 0.0))


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0])) < tol)


def expm_hermitian(h) -> np.ndarray:
    """``exp(i h)`` for Hermitian ``h`` via its eigendecomposition."""
    w, q = np.linalg.eigh(h)
    return (q * np.exp(1j * w)) @ q.conj().T


def polar_unitary(a) -> np.ndarray:
    """Closest unitary to ``a`` in Frobenius norm."""
    u, _, vh = np.linalg.svd(a)
    return u @ vh
