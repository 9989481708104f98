"""Eigensolver backend selection: numpy (LAPACK) and a compiled Jacobi core.

Both backends honour the same contract: descending eigenvalues, orthonormal
column eigenvectors.  The compiled extension (``posmaps._jacobi``) is a
self-contained cyclic Jacobi solver; benchmarks (`benchmarks/bench_backends.py`)
show numpy's LAPACK path is at least as fast at every size this package
uses (the Jacobi core only draws level on very sparse inputs), so ``auto``
prefers numpy and the compiled core is an opt-in
(``POSMAPS_BACKEND=compiled`` or :func:`use_backend`) that doubles as an
independent cross-check of the LAPACK results.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from . import _jacobi as _compiled
except ImportError:
    _compiled = None

_REL_TOL = 1e-12


def _eigh_numpy(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), np.ascontiguousarray(v[:, ::-1])


def _min_eig_numpy(stack: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.linalg.eigvalsh(stack)[..., 0])


def _eigh_compiled(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return _compiled.eigh(h, _REL_TOL)


def _min_eig_compiled(stack: np.ndarray) -> np.ndarray:
    return _compiled.min_eigvalsh_batch(np.asarray(stack, dtype=complex), _REL_TOL)


_IMPLS = {
    "numpy": (_eigh_numpy, _min_eig_numpy),
    "compiled": (_eigh_compiled, _min_eig_compiled),
}


def available_backends() -> tuple[str, ...]:
    return ("numpy", "compiled") if _compiled is not None else ("numpy",)


def _resolve(name: str) -> str:
    name = name.strip().lower()
    if name in ("", "auto"):
        return "numpy"
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}; use 'auto', 'compiled' or 'numpy'")
    if name == "compiled" and _compiled is None:
        raise ImportError("the posmaps._jacobi extension is not built")
    return name


_ACTIVE = _resolve(os.environ.get("POSMAPS_BACKEND", "auto"))


def backend_name() -> str:
    """Name of the eigensolver backend in use ('numpy' or 'compiled')."""
    return _ACTIVE


def use_backend(name: str) -> None:
    """Switch backend at runtime (mainly for tests and benchmarks)."""
    global _ACTIVE
    _ACTIVE = _resolve(name)


def eigh_desc(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition, eigenvalues descending, eigenvectors as columns."""
    return _IMPLS[_ACTIVE][0](h)


def min_eig_batch(stack: np.ndarray) -> np.ndarray:
    """Minimum eigenvalue of every Hermitian matrix in an (n, d, d) stack."""
    return _IMPLS[_ACTIVE][1](stack)
