"""Positive-map families in coefficient/Kraus-pair form, and their witnesses.

Every map here is stored as ``rho -> sum_mn coeff[m, n] V_m rho V_n^dagger``
(acting on ``rho^T`` instead when ``transposed_input`` is set), with a
Hermitian coefficient matrix over a linearly independent operator basis.
That pair form is what the indecomposability test in :mod:`posmaps.criterion`
consumes, and it converts to and from block entanglement witnesses without
loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from ._backend import min_eig_batch
from .linalg import DEFAULT_TOL, BipartiteShape

_COEFF_TOL = 1e-12


@dataclass(frozen=True)
class KrausPairMap:
    """A linear map in pair form over an operator basis.

    ``kraus_basis`` holds the basis operators V_m (kept exactly as given, not
    canonicalized); ``coeff`` is the Hermitian coefficient matrix over that
    basis.  With ``transposed_input`` the map acts on the transposed argument.
    """

    dim_in: int
    dim_out: int
    kraus_basis: tuple[np.ndarray, ...]
    coeff: np.ndarray
    transposed_input: bool = False

    def __post_init__(self) -> None:
        ops = tuple(np.asarray(v, dtype=complex) for v in self.kraus_basis)
        if not ops:
            raise ValueError("kraus_basis must not be empty")
        for v in ops:
            if v.shape != (self.dim_out, self.dim_in):
                raise ValueError(
                    f"basis operator has shape {v.shape}, expected "
                    f"({self.dim_out}, {self.dim_in})"
                )
            v.setflags(write=False)
        co = np.asarray(self.coeff, dtype=complex)
        n = len(ops)
        if co.shape != (n, n):
            raise ValueError(f"coeff has shape {co.shape}, expected ({n}, {n})")
        linalg.require_hermitian(co, _COEFF_TOL, what="coefficient matrix")
        vecs = np.stack([v.reshape(-1) for v in ops])
        gram = vecs @ vecs.conj().T
        gw, _ = linalg.hermitian_eig(gram)
        if gw[-1] <= gw[0] * 1e-12:
            raise ValueError("kraus_basis operators are linearly dependent")
        co.setflags(write=False)
        object.__setattr__(self, "kraus_basis", ops)
        object.__setattr__(self, "coeff", co)

    @property
    def n_kraus(self) -> int:
        return len(self.kraus_basis)


@dataclass(frozen=True)
class Witness:
    """Hermitian block operator on H_A (x) H_B with its tensor split."""

    op: np.ndarray
    shape: BipartiteShape

    def __post_init__(self) -> None:
        arr = linalg.require_hermitian(self.op, what="witness")
        if arr.shape[0] != self.shape.dim:
            raise ValueError(
                f"witness dimension {arr.shape[0]} does not match shape {self.shape}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "op", arr)


@dataclass(frozen=True)
class HermitianBasis:
    """Orthonormal Hermitian operator basis with the identity element first."""

    dim: int
    elements: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        els = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        if len(els) != self.dim * self.dim:
            raise ValueError(f"expected {self.dim ** 2} elements, got {len(els)}")
        ident = els[0] * np.sqrt(self.dim)
        if linalg.max_abs(ident - np.eye(self.dim)) > 1e-10:
            raise ValueError("first element must be identity / sqrt(dim)")
        vecs = np.stack([e.reshape(-1) for e in els])
        gram = vecs.conj() @ vecs.T
        if linalg.max_abs(gram - np.eye(len(els))) > 1e-10:
            raise ValueError("elements are not orthonormal under Tr(F G)")
        for e in els:
            e.setflags(write=False)
        object.__setattr__(self, "elements", els)


def apply(m: KrausPairMap, rho) -> np.ndarray:
    """Evaluate the map on an operator."""
    arr = linalg.as_operator(rho)
    if arr.shape[0] != m.dim_in:
        raise ValueError(f"operator dimension {arr.shape[0]} != map input {m.dim_in}")
    if m.transposed_input:
        arr = arr.T
    k = np.stack(m.kraus_basis)
    return np.einsum("mn,mab,bc,ndc->ad", m.coeff, k, arr, k.conj(), optimize=True)


def transfer_matrix(m: KrausPairMap) -> np.ndarray:
    """Matrix T with vec(map(rho)) = T @ vec(rho^T if transposed_input else rho)."""
    k = np.stack(m.kraus_basis)
    t = np.einsum("mn,mab,ncd->acbd", m.coeff, k, k.conj(), optimize=True)
    return t.reshape(m.dim_out ** 2, m.dim_in ** 2)


def jamiolkowski_pre_transpose(m: KrausPairMap) -> np.ndarray:
    """sum_mn coeff[m, n] |V_m><V_n| - the witness before any partial transpose."""
    vecs = np.stack([v.reshape(-1) for v in m.kraus_basis])
    w0 = vecs.T @ m.coeff @ vecs.conj()
    return 0.5 * (w0 + w0.conj().T)


def jamiolkowski_witness(m: KrausPairMap) -> Witness:
    """Block witness of the map: the pair form evaluated on the unnormalized
    maximally entangled projector, with a partial transpose appended for maps
    acting on ``rho^T``."""
    if m.dim_in != m.dim_out:
        raise ValueError("witness conversion requires dim_in == dim_out")
    shape = BipartiteShape(m.dim_out, m.dim_in)
    w0 = jamiolkowski_pre_transpose(m)
    op = linalg.partial_transpose(w0, shape) if m.transposed_input else w0
    return Witness(op=op, shape=shape)


def witness_to_map(w: Witness, cutoff: float = 1e-13) -> KrausPairMap:
    """Invert the witness correspondence.

    The result acts as ``rho -> Tr_B(W (I (x) rho^T))`` and always comes back
    in the non-transposed pair form (Kraus operators from the witness
    eigenvectors, coefficients from its spectrum).
    """
    if w.shape.dim_a != w.shape.dim_b:
        raise ValueError("witness must live on H (x) H with equal factors")
    d = w.shape.dim_a
    vals, vecs = linalg.hermitian_eig(w.op)
    scale = max(1.0, float(np.abs(vals).max())) if vals.size else 1.0
    keep = np.nonzero(np.abs(vals) > cutoff * scale)[0]
    if keep.size == 0:
        return KrausPairMap(d, d, (np.eye(d, dtype=complex),),
                            np.zeros((1, 1), dtype=complex))
    ops = tuple(linalg.devectorize(vecs[:, i], d) for i in keep)
    coeff = np.diag(vals[keep]).astype(complex)
    return KrausPairMap(d, d, ops, coeff, transposed_input=False)


def antisymmetric_basis(d: int) -> tuple[np.ndarray, ...]:
    """Operators |k><l| - |l><k| for k < l, in row-major pair order."""
    ops = []
    for k in range(d):
        for l in range(k + 1, d):
            a = np.zeros((d, d), dtype=complex)
            a[k, l] = 1.0
            a[l, k] = -1.0
            ops.append(a)
    return tuple(ops)


def upper_pairs(d: int) -> tuple[tuple[int, int], ...]:
    """Index pairs (k, l), k < l, in the order used by antisymmetric_basis."""
    return tuple((k, l) for k in range(d) for l in range(k + 1, d))


def reduction_map(d: int) -> KrausPairMap:
    """rho -> Tr(rho) I - rho, in pair form on rho^T with unit coefficients."""
    if d < 2:
        raise ValueError("reduction map needs dimension >= 2")
    ops = antisymmetric_basis(d)
    return KrausPairMap(d, d, ops, np.eye(len(ops), dtype=complex),
                        transposed_input=True)


def antisymmetric_unitary(d: int, phases=None, orthogonal=None) -> np.ndarray:
    """Antisymmetric unitary V D V^T from block phases and a real orthogonal V.

    D carries exp(i phi_k) on the 2x2 block (|2k><2k+1| - |2k+1><2k|).  Only
    even dimensions admit such a unitary: antisymmetry forces eigenvalues into
    +/- pairs, so an odd-dimensional antisymmetric operator is singular.
    """
    if d < 2 or d % 2:
        raise ValueError(
            f"no antisymmetric unitary exists in odd dimension {d}: "
            "an antisymmetric operator has paired +/- eigenvalues and would be singular"
        )
    if phases is None:
        phases = np.zeros(d // 2)
    phases = np.asarray(phases, dtype=float).reshape(-1)
    if phases.size != d // 2:
        raise ValueError(f"expected {d // 2} phases, got {phases.size}")
    if orthogonal is None:
        orthogonal = np.eye(d)
    v = np.asarray(orthogonal, dtype=float)
    if v.shape != (d, d):
        raise ValueError(f"orthogonal matrix has shape {v.shape}, expected ({d}, {d})")
    if linalg.max_abs(v.T @ v - np.eye(d)) > 1e-10:
        raise ValueError("conjugating matrix is not orthogonal (O^T O != I)")
    dmat = np.zeros((d, d), dtype=complex)
    for k in range(d // 2):
        dmat[2 * k, 2 * k + 1] = np.exp(1j * phases[k])
        dmat[2 * k + 1, 2 * k] = -np.exp(1j * phases[k])
    u = v @ dmat @ v.T
    if linalg.max_abs(u.conj().T @ u - np.eye(d)) > 1e-10:
        raise ValueError("constructed operator failed the unitarity check")
    if linalg.max_abs(u + u.T) > 1e-12:
        raise ValueError("constructed operator failed the antisymmetry check")
    return u


def extended_reduction_map(d: int, unitary) -> KrausPairMap:
    """rho -> Tr(rho) I - rho - U rho^T U^dagger for an antisymmetric unitary U.

    In pair form over the antisymmetric basis the coefficient matrix is
    I - |u><u| with u the upper-triangle entries of U; since <u|u> = d/2 it
    has the single negative eigenvalue 1 - d/2 for d > 2 (and the map
    vanishes identically at d = 2).
    """
    u = linalg.as_operator(unitary)
    if u.shape[0] != d:
        raise ValueError(f"unitary has dimension {u.shape[0]}, expected {d}")
    if linalg.max_abs(u + u.T) > 1e-10:
        raise ValueError("U is not antisymmetric (U != -U^T)")
    if linalg.max_abs(u.conj().T @ u - np.eye(d)) > 1e-10:
        raise ValueError("U is not unitary (U^dagger U != I)")
    ops = antisymmetric_basis(d)
    uvec = np.array([u[k, l] for k, l in upper_pairs(d)])
    coeff = np.eye(len(ops), dtype=complex) - np.outer(uvec, uvec.conj())
    return KrausPairMap(d, d, ops, coeff, transposed_input=True)


def gellmann_basis(d: int) -> HermitianBasis:
    """Orthonormal Hermitian basis: I/sqrt(d) first, then the symmetric,
    antisymmetric and diagonal off-identity elements."""
    if d < 2:
        raise ValueError("basis needs dimension >= 2")
    els = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for k, l in upper_pairs(d):
        m = np.zeros((d, d), dtype=complex)
        m[k, l] = 1.0
        m[l, k] = 1.0
        els.append(m / np.sqrt(2.0))
    for k, l in upper_pairs(d):
        m = np.zeros((d, d), dtype=complex)
        m[k, l] = -1.0j
        m[l, k] = 1.0j
        els.append(m / np.sqrt(2.0))
    for ell in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        for j in range(ell):
            m[j, j] = 1.0
        m[ell, ell] = -float(ell)
        els.append(m / np.sqrt(ell * (ell + 1.0)))
    return HermitianBasis(dim=d, elements=tuple(els))


def piani_map(d1: int, d2: int, lambda1, lambda2) -> KrausPairMap:
    """Sum of two one-sided filter maps on H_1 (x) H_2.

    The composite acts as ``L1 (x) I + I (x) L2`` where each factor is
    ``rho -> lam[0] rho + sum_{mu >= 1} lam[mu] F_mu rho F_mu`` over the
    traceless orthonormal basis elements.  The pair form keeps the bare
    identity as its first basis operator, so the leading coefficient is
    ``lambda1[0] + lambda2[0]``.

    A negative weight is allowed only in the last slot of ``lambda2`` and
    only when every other weight dominates its magnitude; that is the known
    sufficient condition for the sum to stay a positive map.
    """
    lam1 = np.asarray(lambda1, dtype=float).reshape(-1)
    lam2 = np.asarray(lambda2, dtype=float).reshape(-1)
    if lam1.size != d1 * d1:
        raise ValueError(f"lambda1 must have {d1 * d1} entries, got {lam1.size}")
    if lam2.size != d2 * d2:
        raise ValueError(f"lambda2 must have {d2 * d2} entries, got {lam2.size}")
    last = lam2[-1]
    others = np.concatenate([lam1, lam2[:-1]])
    if last < 0.0:
        if others.min() < abs(last) - 1e-12:
            raise ValueError(
                "positivity requires every other coefficient to be >= |lambda2[-1]| "
                f"(min {others.min():.6g} < {abs(last):.6g})"
            )
    elif others.min() < -1e-12:
        raise ValueError("only the last entry of lambda2 may be negative")
    f1 = gellmann_basis(d1).elements
    f2 = gellmann_basis(d2).elements
    i1 = np.eye(d1, dtype=complex)
    i2 = np.eye(d2, dtype=complex)
    ops = [np.eye(d1 * d2, dtype=complex)]
    diag = [lam1[0] + lam2[0]]
    for mu in range(1, d1 * d1):
        ops.append(linalg.kron(f1[mu], i2))
        diag.append(lam1[mu])
    for mu in range(1, d2 * d2):
        ops.append(linalg.kron(i1, f2[mu]))
        diag.append(lam2[mu])
    coeff = np.diag(np.asarray(diag, dtype=complex))
    return KrausPairMap(d1 * d2, d1 * d2, tuple(ops), coeff, transposed_input=False)


def choi_map() -> KrausPairMap:
    """The classic dimension-3 positive map in pair form:
    rho -> sum_k (2 P_kk rho P_kk + 2 P_{k-1,k} rho P_{k-1,k}^dagger) - rho,
    with the projector indices taken mod 3.

    The -rho term is -sum_kl P_kk rho P_ll, so over the independent basis
    {P_kk} + {P_{k-1,k}} the coefficient matrix is block-diagonal
    (2 I - ones) (+) 2 I, with spectrum {-1, 2 x5}.
    """
    d = 3

    def unit(i: int, j: int) -> np.ndarray:
        m = np.zeros((d, d), dtype=complex)
        m[i % d, j % d] = 1.0
        return m

    ops = [unit(k, k) for k in range(d)]
    ops += [unit(k - 1, k) for k in range(d)]
    coeff = np.zeros((2 * d, 2 * d), dtype=complex)
    coeff[:d, :d] = 2.0 * np.eye(d) - np.ones((d, d))
    coeff[d:, d:] = 2.0 * np.eye(d)
    return KrausPairMap(d, d, tuple(ops), coeff, transposed_input=False)


def compose_transpose(m: KrausPairMap) -> KrausPairMap:
    """Precompose with the transpose map: flips the transposed_input flag."""
    return KrausPairMap(m.dim_in, m.dim_out, m.kraus_basis, m.coeff,
                        transposed_input=not m.transposed_input)


def min_output_eigenvalue(m: KrausPairMap, samples: int = 10000, seed=0,
                          chunk: int = 4096) -> float:
    """Smallest eigenvalue of map(|psi><psi|) over Haar-random pure inputs.

    A sampled positivity check: values at or above -1e-9 over 10^4 states is
    the package-wide regression bar for the constructed families.
    """
    t = transfer_matrix(m)
    rng = linalg.rng_from_seed(seed)
    best = np.inf
    left = samples
    while left > 0:
        n = min(chunk, left)
        left -= n
        psis = linalg.random_pure_states(m.dim_in, n, rng)
        if m.transposed_input:
            psis = psis.conj()
        rho = np.einsum("ni,nj->nij", psis, psis.conj()).reshape(n, -1)
        out = (rho @ t.T).reshape(n, m.dim_out, m.dim_out)
        out = 0.5 * (out + out.conj().transpose(0, 2, 1))
        best = min(best, float(min_eig_batch(out).min()))
    return best


def min_product_expectation(w: Witness, samples: int = 2000, seed=0) -> float:
    """Smallest <a (x) b| W |a (x) b> over random product kets (witness check)."""
    rng = linalg.rng_from_seed(seed)
    a = linalg.random_pure_states(w.shape.dim_a, samples, rng)
    b = linalg.random_pure_states(w.shape.dim_b, samples, rng)
    ab = np.einsum("na,nb->nab", a, b).reshape(samples, -1)
    vals = np.einsum("ni,ij,nj->n", ab.conj(), w.op, ab).real
    return float(vals.min())
