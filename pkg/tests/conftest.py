import numpy as np


def basis_ket(dim: int, idx: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[idx] = 1.0
    return e


def proj(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


def max_entry(a) -> float:
    return float(np.abs(np.asarray(a)).max())
