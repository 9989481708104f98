"""Dense complex linear algebra for desk-scale bipartite operator work.

Conventions used throughout the package:

* composite (row-major) index: the basis ket ``|i>|k>`` of ``H_A (x) H_B``
  sits at position ``i * dim_b + k``;
* vectorization ``|V> = sum_ij V_ij |i>|j>``, i.e. ``v.reshape(-1)`` in
  row-major order, so that ``<vec(A)|vec(B)> = Tr(A^dagger B)``;
* Hermitian eigenvalues are always reported in descending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import eigh_desc


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances shared by validation and certification steps."""

    hermiticity: float = 1e-10
    psd_cutoff: float = -1e-9
    equality: float = 1e-9


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class BipartiteShape:
    """Tensor factorization H_A (x) H_B of a composite space."""

    dim_a: int
    dim_b: int

    def __post_init__(self) -> None:
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("subsystem dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


def as_operator(a) -> np.ndarray:
    """Coerce to a square complex matrix."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def max_abs(a) -> float:
    arr = np.asarray(a)
    return 0.0 if arr.size == 0 else float(np.abs(arr).max())


def require_hermitian(a, tol: float = DEFAULT_TOL.hermiticity,
                      what: str = "operator") -> np.ndarray:
    arr = as_operator(a)
    dev = max_abs(arr - arr.conj().T)
    if dev > tol * max(1.0, max_abs(arr)):
        raise ValueError(f"{what} is not Hermitian (max |A - A^dagger| = {dev:.3e})")
    return arr


def _check_shape(arr: np.ndarray, shape: BipartiteShape) -> None:
    if arr.shape[0] != shape.dim:
        raise ValueError(
            f"operator dimension {arr.shape[0]} does not match "
            f"{shape.dim_a} x {shape.dim_b}"
        )


def kron(a, b) -> np.ndarray:
    """Tensor product with composite index (i, k) -> i * dim_b + k."""
    return np.kron(as_operator(a), as_operator(b))


def partial_transpose(w, shape: BipartiteShape) -> np.ndarray:
    """Transpose the second tensor factor: result[(i,l),(j,k)] = w[(i,k),(j,l)]."""
    arr = as_operator(w)
    _check_shape(arr, shape)
    da, db = shape.dim_a, shape.dim_b
    return arr.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(arr.shape).copy()


def partial_trace(w, shape: BipartiteShape, side: str = "B") -> np.ndarray:
    """Trace out one subsystem; ``side`` names the subsystem removed."""
    arr = as_operator(w)
    _check_shape(arr, shape)
    a4 = arr.reshape(shape.dim_a, shape.dim_b, shape.dim_a, shape.dim_b)
    s = side.upper()
    if s == "B":
        return np.einsum("ikjk->ij", a4)
    if s == "A":
        return np.einsum("kikj->ij", a4)
    raise ValueError("side must be 'A' or 'B'")


def vectorize(v) -> np.ndarray:
    """Row-major vectorization |V> = sum_ij V_ij |i>|j>."""
    return as_operator(v).reshape(-1).copy()


def devectorize(k, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    arr = np.asarray(k, dtype=complex).reshape(-1)
    if dim is None:
        dim = math.isqrt(arr.size)
    if dim * dim != arr.size:
        raise ValueError(f"ket of length {arr.size} is not a vectorized {dim} x {dim} matrix")
    return arr.reshape(dim, dim).copy()


def frobenius_inner(a, b) -> complex:
    """Tr(A^dagger B), the inner product vectorization preserves."""
    return complex(np.vdot(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)))


def hermitian_eig(h, tol: float = DEFAULT_TOL.hermiticity) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` descending and orthonormal
    eigenvectors as the columns of ``v``.  Raises on non-Hermitian input.
    """
    return eigh_desc(require_hermitian(h, tol))


def psd_project(h, tol: float = DEFAULT_TOL.hermiticity) -> np.ndarray:
    """Nearest positive semidefinite matrix in Frobenius norm (clip negatives)."""
    w, v = hermitian_eig(h, tol)
    w = np.clip(w, 0.0, None)
    out = (v * w) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def _stack_kets(kets: Sequence[np.ndarray], ambient_dim: int) -> np.ndarray:
    if len(kets) == 0:
        return np.zeros((0, ambient_dim), dtype=complex)
    mat = np.asarray([np.asarray(k, dtype=complex).reshape(-1) for k in kets])
    if mat.shape[1] != ambient_dim:
        raise ValueError(f"kets have length {mat.shape[1]}, expected {ambient_dim}")
    return mat


def orthonormal_split(kets: Sequence[np.ndarray], ambient_dim: int,
                      rank_rtol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (as rows) of span(kets) and of its orthocomplement.

    Raises when the input kets are linearly dependent.
    """
    mat = _stack_kets(kets, ambient_dim)
    if mat.shape[0] == 0:
        return mat, np.eye(ambient_dim, dtype=complex)
    proj = mat.T @ mat.conj()
    w, v = hermitian_eig(proj)
    cut = max(w[0], 0.0) * ambient_dim * rank_rtol
    rank = int(np.count_nonzero(w > cut))
    if rank < mat.shape[0]:
        raise ValueError(
            f"input kets are linearly dependent (rank {rank} < {mat.shape[0]})"
        )
    return v[:, :rank].T.copy(), v[:, rank:].T.copy()


def orthonormal_complement(kets: Sequence[np.ndarray], ambient_dim: int) -> np.ndarray:
    """Orthonormal basis (rows) of the subspace orthogonal to every input ket."""
    return orthonormal_split(kets, ambient_dim)[1]


# --- seeded random objects -------------------------------------------------

def rng_from_seed(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_pure_states(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random kets (rows): normalized complex Gaussian vectors."""
    g = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    return random_pure_states(dim, 1, rng)[0]


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


def random_psd(dim: int, rng: np.random.Generator, rank: int | None = None,
               trace_one: bool = False) -> np.ndarray:
    """G G^dagger with complex Gaussian G of the given (default random) rank."""
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    out = g @ g.conj().T
    if trace_one:
        out /= np.trace(out).real
    return out


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random real orthogonal matrix (QR with sign fix)."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diagonal(r))
