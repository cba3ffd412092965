"""Validated state types, Schmidt-correlated embeddings and random sampling."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

import numpy as np

from .exceptions import (
    DimensionMismatch,
    NotHermitian,
    NotNormalized,
    NotPSD,
    TraceNotOne,
    ValidationError,
)
from .linalg import BipartiteDims, as_dims

STATE_TOL = 1e-9

SeedLike = Union[int, np.random.Generator, None]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _frozen(a, dtype=complex) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix with local dims.

    ``dims`` is a tuple of local dimensions; two entries for bipartite
    states, more for multipartite SC embeddings.
    """

    mat: np.ndarray
    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "mat", _frozen(self.mat))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def bipartite(self) -> BipartiteDims:
        if len(self.dims) == 2:
            return BipartiteDims(*self.dims)
        # group first party against the rest
        return BipartiteDims(self.dims[0], int(np.prod(self.dims[1:])))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.linalg.eigvalsh(self.mat)[::-1]


@dataclass(frozen=True, eq=False)
class PureState:
    """Bipartite pure state stored as its ``M x N`` coefficient matrix."""

    coeffs: np.ndarray

    def __post_init__(self):
        a = _frozen(self.coeffs)
        if a.ndim != 2:
            raise DimensionMismatch("coefficient matrix must be 2-D")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > 1e-10:
            raise NotNormalized(f"||A||_F = {norm:.3g}, expected 1", abs(norm - 1.0))
        object.__setattr__(self, "coeffs", a)

    @classmethod
    def from_vector(cls, psi, dims) -> "PureState":
        m, n = as_dims(dims)
        return cls(np.asarray(psi, dtype=complex).reshape(m, n))

    @property
    def dims(self) -> BipartiteDims:
        return BipartiteDims(*self.coeffs.shape)

    @property
    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def density(self) -> DensityMatrix:
        v = self.vector
        return DensityMatrix(np.outer(v, v.conj()), self.dims)


@dataclass(frozen=True, eq=False)
class SCCoefficients:
    """Coefficients ``c_mn`` of ``sum c_mn |m...m><n...n|``.

    ``c`` is ``d x d`` with ``d`` the number of levels per party.
    """

    c: np.ndarray
    parties: int = 2

    def __post_init__(self):
        c = _frozen(self.c)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 2:
            raise DimensionMismatch(f"coefficient matrix must be square d>=2, got {c.shape}")
        if self.parties < 2:
            raise ValueError("an SC state needs at least two parties")
        herm = np.abs(c - c.conj().T).max()
        if herm > STATE_TOL:
            raise NotHermitian(f"c is not Hermitian (max deviation {herm:.3g})", herm)
        tr = np.trace(c).real
        if abs(tr - 1) > STATE_TOL:
            raise TraceNotOne(f"sum of c_mm = {tr:.12g}, expected 1", abs(tr - 1))
        lmin = np.linalg.eigvalsh(0.5 * (c + c.conj().T)).min()
        if lmin < -STATE_TOL:
            d = np.real(np.diag(c))
            gap = max(
                (abs(c[i, j]) ** 2 - d[i] * d[j] for i in range(len(d)) for j in range(i)),
                default=0.0,
            )
            detail = f"; c_mm c_nn < |c_mn|^2 by {gap:.3g}" if gap > 0 else ""
            raise NotPSD(f"c is not positive semidefinite (min eigenvalue {lmin:.3g}){detail}", -lmin)
        object.__setattr__(self, "c", c)

    @classmethod
    def two_qubit(cls, c1: float, c2: complex, c4: float) -> "SCCoefficients":
        """``c1|00><00| + c2|00><11| + c2*|11><00| + c4|11><11|``."""
        c2 = complex(c2)
        return cls(np.array([[c1, c2], [c2.conjugate(), c4]], dtype=complex))

    @property
    def levels(self) -> int:
        return self.c.shape[0]

    @property
    def is_two_qubit(self) -> bool:
        return self.levels == 2 and self.parties == 2

    @property
    def c1(self) -> float:
        return float(self.c[0, 0].real)

    @property
    def c2(self) -> complex:
        return complex(self.c[0, 1])

    @property
    def c4(self) -> float:
        return float(self.c[1, 1].real)


@dataclass(frozen=True)
class LocalUnitary2:
    """Pair of 2x2 unitaries ``[[a1, -a2], [a2*, a1*]] ⊗ [[b1, -b2], [b2*, b1*]]``."""

    a1: complex
    a2: complex
    b1: complex
    b2: complex

    def __post_init__(self):
        for name, (x, y) in {"a": (self.a1, self.a2), "b": (self.b1, self.b2)}.items():
            dev = abs(abs(x) ** 2 + abs(y) ** 2 - 1)
            if dev > 1e-10:
                raise NotNormalized(f"|{name}1|^2 + |{name}2|^2 deviates from 1 by {dev:.3g}", dev)

    @staticmethod
    def _factor(x, y) -> np.ndarray:
        return np.array([[x, -y], [np.conj(y), np.conj(x)]], dtype=complex)

    @property
    def u1(self) -> np.ndarray:
        return self._factor(self.a1, self.a2)

    @property
    def u2(self) -> np.ndarray:
        return self._factor(self.b1, self.b2)

    def factors(self) -> list:
        return [self.u1, self.u2]

    @classmethod
    def random(cls, seed: SeedLike = None) -> "LocalUnitary2":
        rng = _rng(seed)
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        return cls(z[0, 0], z[0, 1], z[1, 0], z[1, 1])


def validate_density(m, dims=None, tol: float = STATE_TOL) -> DensityMatrix:
    """Check Hermiticity, positivity and trace, returning a :class:`DensityMatrix`.

    ``dims`` defaults to a single party of the full dimension.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got {m.shape}")
    if dims is None:
        dims = (m.shape[0],)
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != m.shape[0]:
        raise DimensionMismatch(f"dims {dims} do not match matrix size {m.shape[0]}")
    herm = float(np.abs(m - m.conj().T).max())
    if herm > tol:
        raise NotHermitian(f"matrix is not Hermitian (max |m - m^dag| = {herm:.3g})", herm)
    lmin = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
    if lmin < -tol:
        raise NotPSD(f"matrix has negative eigenvalue {lmin:.3g}", -lmin)
    tr = float(np.trace(m).real)
    if abs(tr - 1) > tol:
        raise TraceNotOne(f"trace is {tr:.12g}, expected 1", abs(tr - 1))
    return DensityMatrix(m, dims)


def sc_embed(sc: SCCoefficients) -> DensityMatrix:
    """Embed SC coefficients as a density matrix on ``parties`` copies of C^d."""
    d, m = sc.levels, sc.parties
    dim = d**m
    # |k k ... k> sits at index k * (d^m - 1) / (d - 1)
    stride = (dim - 1) // (d - 1)
    idx = np.arange(d) * stride
    rho = np.zeros((dim, dim), dtype=complex)
    rho[np.ix_(idx, idx)] = sc.c
    return DensityMatrix(rho, (d,) * m)


def haar_unitary(dim: int, seed: SeedLike = None) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Ginibre matrix.

    The phases of ``diag(R)`` are divided out so the distribution is exactly
    Haar rather than QR-convention dependent.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = _rng(seed)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_pure_state(dims, seed: SeedLike = None) -> PureState:
    m, n = as_dims(dims)
    rng = _rng(seed)
    a = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
    return PureState(a / np.linalg.norm(a))


def random_density(dim: int, seed: SeedLike = None, rank: int | None = None, dims=None) -> DensityMatrix:
    """Random density matrix ``G G^dag / tr`` from a Ginibre ``G``."""
    rng = _rng(seed)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims or (dim,))


def random_sc(seed: SeedLike = None, n_levels: int = 2, parties: int = 2) -> SCCoefficients:
    """Random SC coefficients as a normalised Gram matrix of random vectors.

    The Gram rank is drawn uniformly from ``1..n_levels`` so pure SC states
    are sampled too.
    """
    if n_levels < 2:
        raise ValueError("n_levels must be >= 2")
    rng = _rng(seed)
    rank = int(rng.integers(1, n_levels + 1))
    g = rng.normal(size=(n_levels, rank)) + 1j * rng.normal(size=(n_levels, rank))
    c = g @ g.conj().T
    c = c / np.trace(c).real
    # exact Hermiticity and unit trace
    c = 0.5 * (c + c.conj().T)
    return SCCoefficients(c, parties)


def local_operator(u) -> np.ndarray:
    """Tensor product of a list of local unitaries (or a :class:`LocalUnitary2`)."""
    if isinstance(u, LocalUnitary2):
        u = u.factors()
    return reduce(np.kron, [np.asarray(f, dtype=complex) for f in u])


def conjugate_by_locals(rho: DensityMatrix, u: Union[LocalUnitary2, Sequence[np.ndarray]]) -> DensityMatrix:
    """``(U1 ⊗ ... ⊗ Un) rho (U1 ⊗ ... ⊗ Un)^dag``."""
    factors = u.factors() if isinstance(u, LocalUnitary2) else list(u)
    shapes = tuple(np.asarray(f).shape[0] for f in factors)
    if shapes != tuple(rho.dims):
        raise DimensionMismatch(f"unitaries act on {shapes}, state has dims {rho.dims}")
    w = local_operator(factors)
    return DensityMatrix(w @ rho.mat @ w.conj().T, rho.dims)


def bell_density() -> DensityMatrix:
    v = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return DensityMatrix(np.outer(v, v.conj()), (2, 2))


__all__ = [
    "DensityMatrix",
    "PureState",
    "SCCoefficients",
    "LocalUnitary2",
    "ValidationError",
    "validate_density",
    "sc_embed",
    "haar_unitary",
    "random_pure_state",
    "random_density",
    "random_sc",
    "conjugate_by_locals",
    "local_operator",
    "bell_density",
]
