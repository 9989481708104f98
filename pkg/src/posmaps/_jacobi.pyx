# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Cyclic Jacobi eigendecomposition for small dense complex Hermitian matrices.

Compiled hot kernel behind ``posmaps._backend``.  Matrices in this package are
tiny (dimension <= ~40), so a cyclic-sweep strategy that annihilates every
off-diagonal element per sweep converges in a handful of sweeps and avoids
LAPACK call overhead at the smallest sizes.
"""

import numpy as np

ctypedef double complex zdbl

from libc.math cimport sqrt


cdef inline double _cabs2(zdbl z):
    return z.real * z.real + z.imag * z.imag


cdef double _offdiag_sq(zdbl[:, ::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += 2.0 * _cabs2(a[i, j])
    return s


cdef double _frob_sq(zdbl[:, ::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(n):
            s += _cabs2(a[i, j])
    return s


cdef void _rotate(zdbl[:, ::1] a, zdbl[:, ::1] v, Py_ssize_t p, Py_ssize_t q,
                  bint with_vectors):
    """Annihilate a[p, q] with a unitary plane rotation; update a (and v) in place."""
    cdef Py_ssize_t n = a.shape[0]
    cdef zdbl apq = a[p, q]
    cdef double norm = sqrt(_cabs2(apq))
    if norm == 0.0:
        return
    cdef double app = a[p, p].real
    cdef double aqq = a[q, q].real
    cdef double tau = (aqq - app) / (2.0 * norm)
    cdef double t
    if tau >= 0.0:
        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
    cdef double c = 1.0 / sqrt(1.0 + t * t)
    cdef double s = t * c
    cdef zdbl beta = apq / norm
    cdef zdbl bconj = beta.conjugate()
    cdef Py_ssize_t i
    cdef zdbl xp, xq
    # columns: A <- A U with U = [[c, s], [-conj(beta) s, conj(beta) c]]
    for i in range(n):
        xp = a[i, p]
        xq = a[i, q]
        a[i, p] = c * xp - bconj * s * xq
        a[i, q] = s * xp + bconj * c * xq
    # rows: A <- U^dagger A
    for i in range(n):
        xp = a[p, i]
        xq = a[q, i]
        a[p, i] = c * xp - beta * s * xq
        a[q, i] = s * xp + beta * c * xq
    # the 2x2 block is known analytically; writing it kills accumulated roundoff
    a[p, p] = app - t * norm
    a[q, q] = aqq + t * norm
    a[p, q] = 0.0
    a[q, p] = 0.0
    if with_vectors:
        for i in range(n):
            xp = v[i, p]
            xq = v[i, q]
            v[i, p] = c * xp - bconj * s * xq
            v[i, q] = s * xp + bconj * c * xq


cdef int _sweeps(zdbl[:, ::1] a, zdbl[:, ::1] v, double rel_tol, int max_sweeps,
                 bint with_vectors):
    cdef Py_ssize_t n = a.shape[0]
    cdef double target = rel_tol * rel_tol * _frob_sq(a)
    cdef int sweep
    cdef Py_ssize_t p, q
    if n <= 1:
        return 0
    for sweep in range(max_sweeps):
        if _offdiag_sq(a) <= target:
            return 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q, with_vectors)
    if _offdiag_sq(a) <= target:
        return 0
    return 1


def eigh(h, double rel_tol=1e-12, int max_sweeps=60):
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues in descending order and the matching orthonormal
    eigenvectors as columns.  The input is symmetrized before sweeping, so
    roundoff-level asymmetry is tolerated.
    """
    a = np.array(h, dtype=np.complex128, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    a = np.ascontiguousarray(0.5 * (a + a.conj().T))
    cdef Py_ssize_t n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if _sweeps(a, v, rel_tol, max_sweeps, True) != 0:
        raise RuntimeError("jacobi sweeps did not converge")
    w = np.diagonal(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


def min_eigvalsh_batch(mats, double rel_tol=1e-12, int max_sweeps=60):
    """Smallest eigenvalue of every Hermitian matrix in an (n, d, d) stack."""
    arr = np.array(mats, dtype=np.complex128, copy=True)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError("expected an (n, d, d) stack")
    arr = np.ascontiguousarray(0.5 * (arr + arr.conj().transpose(0, 2, 1)))
    cdef zdbl[:, :, ::1] a3 = arr
    cdef Py_ssize_t nmat = arr.shape[0]
    cdef Py_ssize_t d = arr.shape[1]
    out = np.empty(nmat, dtype=np.float64)
    cdef double[::1] o = out
    dummy = np.empty((1, 1), dtype=np.complex128)
    cdef zdbl[:, ::1] dv = dummy
    cdef zdbl[:, ::1] a2
    cdef Py_ssize_t k, i
    cdef double mn
    for k in range(nmat):
        a2 = a3[k]
        if _sweeps(a2, dv, rel_tol, max_sweeps, False) != 0:
            raise RuntimeError("jacobi sweeps did not converge")
        mn = a2[0, 0].real
        for i in range(1, d):
            if a2[i, i].real < mn:
                mn = a2[i, i].real
        o[k] = mn
    return out
