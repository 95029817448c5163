# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cyclic Jacobi kernel for dense Hermitian matrices.

Mirrors ``_jacobi_py.jacobi_eigh`` rotation for rotation; the Python module
is the reference and the fallback.
"""
import numpy as np

from libc.math cimport fabs, hypot, sqrt


cdef double _frobenius(double complex[:, ::1] a, Py_ssize_t n, bint offdiag) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    cdef double complex x
    for i in range(n):
        for j in range(n):
            if offdiag and i == j:
                continue
            x = a[i, j]
            s += x.real * x.real + x.imag * x.imag
    return sqrt(s)


# Beyond this |theta| the rotation angle is 1/(2 theta) to double precision.
cdef double _THETA_BIG = 1e150


cdef void _rotate(double complex[:, ::1] a, double complex[:, ::1] v,
                  Py_ssize_t n, Py_ssize_t p, Py_ssize_t q) noexcept nogil:
    cdef double complex apq = a[p, q]
    cdef double mag = hypot(apq.real, apq.imag)
    if mag == 0.0:
        return
    cdef double theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    cdef double t
    if fabs(theta) > _THETA_BIG:
        t = 0.5 / fabs(theta)
    else:
        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    cdef double c = 1.0 / sqrt(t * t + 1.0)
    cdef double s = t * c
    # Componentwise so a subnormal ``mag`` cannot overflow the division.
    cdef double complex e
    e.real = apq.real / mag
    e.imag = apq.imag / mag
    cdef double complex se = s * e
    cdef double complex sec = s * e.conjugate()
    cdef Py_ssize_t k
    cdef double complex xp, xq
    for k in range(n):
        xp = a[k, p]
        xq = a[k, q]
        a[k, p] = c * xp - sec * xq
        a[k, q] = se * xp + c * xq
    for k in range(n):
        xp = a[p, k]
        xq = a[q, k]
        a[p, k] = c * xp - se * xq
        a[q, k] = sec * xp + c * xq
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    for k in range(n):
        xp = v[k, p]
        xq = v[k, q]
        v[k, p] = c * xp - sec * xq
        v[k, q] = se * xp + c * xq


def jacobi_eigh(a_in, double tol, int max_sweeps):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(diag, vectors, sweeps, residual, converged)`` with the
    diagonal left unsorted.
    """
    a_np = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a_np.shape[0]
    v_np = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = a_np
    cdef double complex[:, ::1] v = v_np
    cdef Py_ssize_t p, q
    cdef int sweep = 0
    cdef double norm, off
    cdef bint converged = False
    with nogil:
        norm = _frobenius(a, n, False)
        while True:
            off = _frobenius(a, n, True)
            if off <= tol * norm:
                converged = True
                break
            if sweep >= max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate(a, v, n, p, q)
            sweep += 1
    return np.diagonal(a_np).real.copy(), v_np, sweep, off, converged
