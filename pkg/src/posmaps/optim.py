"""Convex-feasibility numerics around witnesses.

Two routines: a block-coordinate splitter that tries to write a witness as
PSD + (PSD)^{T_B}, and a projected-descent search for PPT states with a
negative witness expectation.  Both problems are convex, so a tiny residual
is evidence for feasibility while a firmly stalled one is evidence against -
but neither outcome is a proof; proofs come from :mod:`posmaps.criterion`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import DEFAULT_TOL, BipartiteShape, ToleranceConfig
from .maps import KrausPairMap, Witness


@dataclass(frozen=True)
class DecompositionReport:
    """Outcome of the split W ~ P + Q^{T_B} (P, Q both PSD)."""

    p: np.ndarray
    q: np.ndarray
    residual: float
    iterations: int
    converged: bool
    witness: np.ndarray
    shape: BipartiteShape
    residual_history: tuple[float, ...]


@dataclass(frozen=True)
class ViolationSearchReport:
    """Best PPT state found for a witness, with exact feasibility numbers."""

    state: np.ndarray
    witness_value: float
    min_state_eig: float
    min_ppt_eig: float
    trace_err: float
    iterations: int
    certified: bool
    witness: np.ndarray
    shape: BipartiteShape
    restarts: int
    seed: int | None


def decompose_witness(w: Witness, max_iter: int = 10000, tol: float = 1e-9,
                      stall_window: int = 100,
                      stall_rel: float = 1e-10) -> DecompositionReport:
    """Block-coordinate minimization of ||W - P - Q^{T_B}||_F over PSD P, Q.

    Each block update is the exact minimizer (a PSD projection), so the
    residual never increases.  Stops on residual < tol (converged) or when
    the residual changes by less than ``stall_rel`` relatively over
    ``stall_window`` iterations (stalled).
    """
    warr = w.op
    shape = w.shape
    p = np.zeros_like(warr)
    q = np.zeros_like(warr)
    history: list[float] = []
    residual = float(np.linalg.norm(warr))
    iterations = 0
    for it in range(1, max_iter + 1):
        p = linalg.psd_project(warr - linalg.partial_transpose(q, shape))
        q = linalg.psd_project(linalg.partial_transpose(warr - p, shape))
        residual = float(np.linalg.norm(warr - p - linalg.partial_transpose(q, shape)))
        history.append(residual)
        iterations = it
        if residual < tol:
            break
        if (len(history) > stall_window
                and history[-stall_window - 1] - residual
                < stall_rel * max(residual, 1.0)):
            break
    return DecompositionReport(
        p=p, q=q, residual=residual, iterations=iterations,
        converged=residual < tol, witness=warr.copy(), shape=shape,
        residual_history=tuple(history),
    )


def _project_feasible(x: np.ndarray, shape: BipartiteShape, cycles: int) -> np.ndarray:
    """Dykstra cycles onto {PSD} and {PPT}, with a trace-one recentering."""
    dim = x.shape[0]
    p1 = np.zeros_like(x)
    p2 = np.zeros_like(x)
    for _ in range(cycles):
        y = linalg.psd_project(x + p1)
        p1 = x + p1 - y
        z = linalg.partial_transpose(
            linalg.psd_project(linalg.partial_transpose(y + p2, shape)), shape)
        p2 = y + p2 - z
        x = z + (1.0 - np.trace(z).real) / dim * np.eye(dim)
        x = 0.5 * (x + x.conj().T)
    return x


def _cleanup_state(rho: np.ndarray, shape: BipartiteShape) -> np.ndarray:
    """Make the candidate exactly feasible: PSD, PPT and unit trace.

    Residual infeasibility after the projection cycles is removed by mixing
    in just enough of the maximally mixed state to lift both spectra.
    """
    dim = rho.shape[0]
    rho = linalg.psd_project(0.5 * (rho + rho.conj().T))
    tr = np.trace(rho).real
    if tr <= 0.0:
        return np.eye(dim, dtype=complex) / dim
    rho = rho / tr
    w_state, _ = linalg.hermitian_eig(rho)
    w_ppt, _ = linalg.hermitian_eig(linalg.partial_transpose(rho, shape))
    delta = max(0.0, -float(w_state[-1]), -float(w_ppt[-1]))
    if delta > 0.0:
        theta = min(1.0, (delta * dim / (1.0 + delta * dim)) * (1.0 + 1e-6) + 1e-15)
        rho = (1.0 - theta) * rho + theta * np.eye(dim) / dim
    return rho


def ppt_violation_search(w: Witness, restarts: int = 8, max_iter: int = 300,
                         step: float | None = None, seed=0,
                         dykstra_cycles: int = 20,
                         tol: ToleranceConfig = DEFAULT_TOL) -> ViolationSearchReport:
    """Minimize Tr(W rho) over {rho PSD, rho^{T_B} PSD, Tr rho = 1}.

    Projected descent with a fixed scale-free step (1/||W||_F by default);
    only improving steps are accepted, so the objective is nonincreasing
    within a restart.  The first restart starts from the maximally mixed
    state, the rest from random feasible points.  The best candidate is made
    exactly feasible and certified by eigenvalue checks before reporting.
    """
    warr = w.op
    shape = w.shape
    dim = warr.shape[0]
    eta = step if step is not None else 1.0 / float(np.linalg.norm(warr))
    rng = linalg.rng_from_seed(seed)
    best_val = np.inf
    best_rho = np.eye(dim, dtype=complex) / dim
    total_iters = 0
    for r in range(max(1, restarts)):
        if r == 0:
            rho = np.eye(dim, dtype=complex) / dim
        else:
            rho = linalg.random_psd(dim, rng, trace_one=True)
            rho = _project_feasible(rho, shape, dykstra_cycles)
        val = float(np.trace(warr @ rho).real)
        for _ in range(max_iter):
            total_iters += 1
            cand = _project_feasible(rho - eta * warr, shape, dykstra_cycles)
            cval = float(np.trace(warr @ cand).real)
            if cval <= val + 1e-14:
                rho, val = cand, cval
            else:
                break
        rho = _cleanup_state(rho, shape)
        val = float(np.trace(warr @ rho).real)
        if val < best_val:
            best_val, best_rho = val, rho
    w_state, _ = linalg.hermitian_eig(best_rho)
    w_ppt, _ = linalg.hermitian_eig(linalg.partial_transpose(best_rho, shape))
    trace_err = abs(np.trace(best_rho).real - 1.0)
    certified = bool(
        w_state[-1] >= tol.psd_cutoff
        and w_ppt[-1] >= tol.psd_cutoff
        and trace_err <= tol.equality
        and best_val < -tol.equality
    )
    return ViolationSearchReport(
        state=best_rho, witness_value=best_val,
        min_state_eig=float(w_state[-1]), min_ppt_eig=float(w_ppt[-1]),
        trace_err=float(trace_err), iterations=total_iters,
        certified=certified, witness=warr.copy(), shape=shape,
        restarts=restarts, seed=seed,
    )


def verify_detection(m: KrausPairMap, rho, shape: BipartiteShape,
                     tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of (I (x) map)(rho); a negative value certifies
    that rho is entangled, since positive maps keep separable states PSD."""
    arr = linalg.require_hermitian(rho, what="state")
    if arr.shape[0] != shape.dim:
        raise ValueError(f"state dimension {arr.shape[0]} != {shape.dim_a} x {shape.dim_b}")
    if m.dim_in != shape.dim_b:
        raise ValueError(f"map input {m.dim_in} != second factor {shape.dim_b}")
    w_state, _ = linalg.hermitian_eig(arr)
    if w_state[-1] < tol.psd_cutoff:
        raise ValueError(f"state is not PSD (min eigenvalue {w_state[-1]:.3e})")
    if abs(np.trace(arr).real - 1.0) > 1e-6:
        raise ValueError("state must have unit trace")
    eff = linalg.partial_transpose(arr, shape) if m.transposed_input else arr
    a4 = eff.reshape(shape.dim_a, shape.dim_b, shape.dim_a, shape.dim_b)
    k = np.stack(m.kraus_basis)
    out = np.einsum("mn,mik,akbl,njl->aibj", m.coeff, k, a4, k.conj(), optimize=True)
    big = shape.dim_a * m.dim_out
    out = out.reshape(big, big)
    out = 0.5 * (out + out.conj().T)
    vals, _ = linalg.hermitian_eig(out)
    return float(vals[-1])
