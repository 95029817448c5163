"""Pure-Python cyclic Jacobi kernel (reference implementation and fallback)."""

import math

import numpy as np


# Beyond this |theta| the rotation angle is 1/(2 theta) to double precision.
_THETA_BIG = 1e150


def _rotate(a, v, p, q):
    apq = a[p, q]
    mag = math.hypot(apq.real, apq.imag)
    if mag == 0.0:
        return
    theta = (float(a[q, q].real) - float(a[p, p].real)) / (2.0 * mag)
    if abs(theta) > _THETA_BIG:
        t = 0.5 / abs(theta)
    else:
        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    # Componentwise so a subnormal ``mag`` cannot overflow the division.
    e = complex(apq.real / mag, apq.imag / mag)
    se = s * e
    sec = s * e.conjugate()

    xp = a[:, p].copy()
    xq = a[:, q].copy()
    a[:, p] = c * xp - sec * xq
    a[:, q] = se * xp + c * xq
    xp = a[p, :].copy()
    xq = a[q, :].copy()
    a[p, :] = c * xp - se * xq
    a[q, :] = sec * xp + c * xq
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    xp = v[:, p].copy()
    xq = v[:, q].copy()
    v[:, p] = c * xp - sec * xq
    v[:, q] = se * xp + c * xq


def _offdiag_norm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return math.sqrt(np.vdot(off, off).real)


def jacobi_eigh(a_in, tol, max_sweeps):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(diag, vectors, sweeps, residual, converged)`` with the
    diagonal left unsorted.
    """
    a = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    norm = math.sqrt(np.vdot(a, a).real)
    sweep = 0
    while True:
        off = _offdiag_norm(a)
        if off <= tol * norm:
            return np.diagonal(a).real.copy(), v, sweep, off, True
        if sweep >= max_sweeps:
            return np.diagonal(a).real.copy(), v, sweep, off, False
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
        sweep += 1
