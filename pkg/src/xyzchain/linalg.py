"""Dense complex linear algebra for registers of up to 12 qubits.

Kronecker products, a deterministic Hermitian eigensolver (cyclic Jacobi)
and partial traces. The Jacobi sweep loop runs in a compiled extension when
one is available; set ``XYZCHAIN_PURE_PYTHON=1`` to force the Python kernel.

Qubit 0 is the most significant bit of a basis label, so ``|b0 b1 ...>``
reads left to right and index ``i`` of a state vector is the integer whose
binary expansion is ``b0 b1 ...``.
"""

import os
from typing import NamedTuple, Sequence

import numpy as np

from . import _jacobi_py
from .errors import ConvergenceError, InvalidStateError, NonHermitianError

KERNELS = {"python": _jacobi_py.jacobi_eigh}
try:
    from . import _jacobi as _jacobi_ext
except ImportError:  # pragma: no cover - depends on build
    _jacobi_ext = None
else:
    KERNELS["cython"] = _jacobi_ext.jacobi_eigh

if _jacobi_ext is not None and not os.environ.get("XYZCHAIN_PURE_PYTHON"):
    KERNEL = "cython"
else:
    KERNEL = "python"

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
HERMITIAN_RTOL = 1e-12
TRACE_TOL = 1e-12
MAX_QUBITS = 12


class Spectrum(NamedTuple):
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a, b):
    """Kronecker product with entry ``(i*db + k, j*db + l) = a[i, j] * b[k, l]``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0 or b.size == 0:
        raise ValueError("kron operands must be non-empty")
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


def check_hermitian(a, rtol=HERMITIAN_RTOL):
    """Raise :class:`NonHermitianError` unless ``a`` equals its adjoint.

    The tolerance is relative to ``max |a|``; the error names the worst pair.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    scale = float(np.max(np.abs(a)))
    dev = np.abs(a - a.conj().T)
    worst = float(dev.max())
    if worst > rtol * scale:
        i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
        raise NonHermitianError((int(i), int(j)), worst, scale)


def hermitian_eig(a, *, kernel=None, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix.
    kernel : {"cython", "python"}, optional
        Sweep implementation; defaults to the one selected at import.
    tol : float
        Stop once the off-diagonal Frobenius norm is below ``tol * ||a||_F``.
    max_sweeps : int
        Iteration cap; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    Spectrum
        Eigenvalues in ascending order (stable for ties) and eigenvectors as
        columns. Output is bitwise reproducible for identical input.
    """
    a = np.asarray(a, dtype=np.complex128)
    check_hermitian(a)
    solve = KERNELS[kernel or KERNEL]
    diag, vecs, sweeps, off, converged = solve(a, tol, max_sweeps)
    if not converged:
        norm = float(np.linalg.norm(a))
        raise ConvergenceError(sweeps, off, tol * norm)
    order = np.argsort(diag, kind="stable")
    return Spectrum(diag[order], vecs[:, order])


def _check_keep(n_qubits, keep):
    keep = tuple(int(k) for k in keep)
    if not keep:
        raise ValueError("keep must name at least one qubit")
    for k in keep:
        if not 0 <= k < n_qubits:
            raise IndexError(f"qubit index {k} out of range for {n_qubits} qubits")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate qubit indices in keep={keep}")
    return keep


def partial_trace(rho, n_qubits: int, keep: Sequence[int] = (0, 1)):
    """Reduced density matrix on the qubits listed in ``keep``.

    The result is ordered as ``keep`` is, so ``keep=(1, 0)`` swaps the two
    factors. ``rho`` must be a ``2**n_qubits`` square matrix of unit trace.
    """
    rho = np.asarray(rho)
    dim = 2**n_qubits
    if rho.shape != (dim, dim):
        raise InvalidStateError(f"expected a {dim}x{dim} matrix, got {rho.shape}")
    keep = _check_keep(n_qubits, keep)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    if keep == tuple(range(n_qubits)):
        return rho.copy()
    traced = [q for q in range(n_qubits) if q not in keep]
    t = rho.reshape((2,) * (2 * n_qubits))
    # Move kept row axes, traced row axes, kept column axes, traced column axes.
    perm = list(keep) + traced + [n_qubits + q for q in keep] + [n_qubits + q for q in traced]
    t = t.transpose(perm)
    dk = 2 ** len(keep)
    dt = 2 ** len(traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)
