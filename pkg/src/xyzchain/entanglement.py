"""Two-qubit concurrence: generic Wootters route, X-state closed form, thermal closed forms."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError, NotXStateError
from .linalg import hermitian_eig, kron, partial_trace
from .model import SIGMA_Y, ChainParams, build_hamiltonian, two_qubit_spectrum
from .thermal import degeneracy_threshold, gibbs_state, two_qubit_log_partition

SPIN_FLIP = kron(SIGMA_Y, SIGMA_Y)
LAMBDA_TOL = 1e-10
X_RESIDUAL_TOL = 1e-9
IMAG_TOL = 1e-12
STATE_TRACE_TOL = 1e-10

# Standard-basis positions that an X-form matrix may populate.
_X_MASK = np.array(
    [[1, 0, 0, 1],
     [0, 1, 1, 0],
     [0, 1, 1, 0],
     [1, 0, 0, 1]], dtype=bool)


@dataclass(frozen=True)
class XStateElements:
    """Independent entries of an X-form two-qubit density matrix.

    ``u1 = <00|rho|00>``, ``u2 = <11|rho|11>``, ``w = <01|rho|01>``,
    ``v = <00|rho|11>``, ``z = <01|rho|10>``. ``residual`` is the largest
    magnitude found outside the X pattern when the elements were extracted.
    """

    u1: float
    u2: float
    w: float
    v: float
    z: float
    residual: float = 0.0

    def matrix(self):
        u1, u2, w, v, z = self.u1, self.u2, self.w, self.v, self.z
        return np.array(
            [[u1, 0, 0, v],
             [0, w, z, 0],
             [0, z, w, 0],
             [v, 0, 0, u2]], dtype=np.complex128)


@dataclass(frozen=True)
class ConcurrenceValue:
    """Concurrence ``c = max(0, 2 max(lambdas) - sum(lambdas))``; lambdas sorted descending."""

    c: float
    lambdas: tuple

    @property
    def margin(self):
        """``2 max(lambdas) - sum(lambdas)`` before clipping at zero."""
        return 2.0 * self.lambdas[0] - math.fsum(self.lambdas)


def concurrence_from_lambdas(lambdas) -> ConcurrenceValue:
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (4,):
        raise ValueError(f"expected four lambdas, got shape {lam.shape}")
    if np.any(lam < -LAMBDA_TOL) or not np.all(np.isfinite(lam)):
        raise InvalidStateError(f"invalid lambdas {lam.tolist()}")
    lam = np.where(lam < 0.0, 0.0, lam)
    lam = lam[np.argsort(-lam, kind="stable")]
    lam_t = tuple(float(x) for x in lam)
    c = max(0.0, 2.0 * lam_t[0] - math.fsum(lam_t))
    return ConcurrenceValue(c, lam_t)


def _check_two_qubit(rho4):
    rho4 = np.asarray(rho4, dtype=np.complex128)
    if rho4.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 density matrix, got shape {rho4.shape}")
    tr = np.trace(rho4)
    if abs(tr - 1.0) > STATE_TRACE_TOL:
        raise InvalidStateError(f"trace of rho is {tr}, not 1")
    return rho4


def extract_x_elements(rho4) -> XStateElements:
    """Read ``(u1, u2, w, v, z)`` off an X-form state; reject anything else."""
    rho4 = _check_two_qubit(rho4)
    residual = float(np.max(np.abs(rho4[~_X_MASK])))
    if residual > X_RESIDUAL_TOL:
        raise NotXStateError(f"state is not X-form: off-X residual {residual:.3e}", residual)
    imag = float(np.max(np.abs(rho4[_X_MASK].imag)))
    if imag > IMAG_TOL:
        raise NotXStateError(f"X entries carry imaginary parts up to {imag:.3e}", residual)
    re = rho4.real
    if abs(re[1, 1] - re[2, 2]) > X_RESIDUAL_TOL:
        raise NotXStateError(
            f"central populations differ: {re[1, 1]!r} vs {re[2, 2]!r}", residual)
    return XStateElements(
        u1=float(re[0, 0]), u2=float(re[3, 3]), w=float(re[1, 1]),
        v=float(re[0, 3]), z=float(re[1, 2]), residual=residual)


def concurrence_x_state(x: XStateElements) -> ConcurrenceValue:
    """Closed form for X states: lambdas ``|w +/- z|`` and ``|sqrt(u1 u2) +/- v|``."""
    root = math.sqrt(max(x.u1, 0.0) * max(x.u2, 0.0))
    return concurrence_from_lambdas(
        [abs(x.w + x.z), abs(x.w - x.z), abs(root + x.v), abs(root - x.v)])


def concurrence_wootters(rho4) -> ConcurrenceValue:
    """Wootters concurrence of an arbitrary two-qubit density matrix.

    The lambdas (square roots of the eigenvalues of ``rho S rho* S``) are
    obtained as the singular values of ``sqrt(rho) S sqrt(rho)*``, read off
    the Hermitian dilation ``[[0, A], [A^H, 0]]``. This keeps small lambdas
    accurate to roundoff instead of to its square root.
    """
    rho4 = _check_two_qubit(rho4)
    probs, vecs = hermitian_eig(rho4)
    if probs[0] < -LAMBDA_TOL:
        raise InvalidStateError(f"rho has negative eigenvalue {probs[0]:.3e}")
    root = (vecs * np.sqrt(np.clip(probs, 0.0, None))) @ vecs.conj().T
    a = root @ SPIN_FLIP @ root.conj()
    dilation = np.zeros((8, 8), dtype=np.complex128)
    dilation[:4, 4:] = a
    dilation[4:, :4] = a.conj().T
    sv = hermitian_eig(dilation).eigenvalues[::-1][:4]
    return concurrence_from_lambdas(sv)


def _asinh_k_sinh(k, x):
    """``asinh(k * sinh(x))`` for ``x >= 0`` without overflow."""
    if k == 0.0 or x == 0.0:
        return 0.0
    if x < 20.0:
        log_sinh = math.log(math.sinh(x))
    else:
        log_sinh = x - math.log(2.0) + math.log1p(-math.exp(-2.0 * x))
    log_s = math.log(abs(k)) + log_sinh
    if log_s < 18.0:
        mag = math.asinh(math.exp(log_s))
    else:
        mag = math.log(2.0) + log_s
    return math.copysign(mag, k)


def two_qubit_thermal_lambdas(p: ChainParams, t):
    """Closed-form lambdas of the two-site thermal state, in the order l1, l2, l3, l4.

    ``l1,2 = exp(beta J_z/2 +/- beta J) / Z`` and
    ``l3,4 = exp(-beta J_z/2) |sqrt(1 + s**2) -/+ s| / Z`` with
    ``s = (J gamma / eta) sinh(beta eta)``; evaluated in log space, using
    ``sqrt(1 + s**2) -/+ s = exp(-/+ asinh(s))``.
    """
    if p.n_sites != 2:
        raise ValueError("closed-form lambdas need n_sites = 2")
    if not t > 0:
        raise ValueError(f"temperature must be > 0, got {t}")
    beta = 1.0 / t
    j, jg = p.j_mean, p.j_gamma
    eta = math.hypot(p.b_field, jg)
    a = 0.5 * beta * p.j_z
    if eta == 0.0:
        ash = math.asinh(beta * jg)
    else:
        ash = _asinh_k_sinh(jg / eta, beta * eta)
    log_z = two_qubit_log_partition(p, t)
    logs = [a + beta * j, a - beta * j, -a - ash, -a + ash]
    return np.exp(np.array(logs) - log_z)


def closed_form_concurrence(p: ChainParams, t) -> ConcurrenceValue:
    return concurrence_from_lambdas(two_qubit_thermal_lambdas(p, t))


def _in_piecewise_region(p):
    j = p.j_mean
    if not j > 0:
        return False
    gamma = p.gamma
    return 0.0 < gamma < 1.0 and p.j_z <= j


def zero_t_concurrence(p: ChainParams) -> float:
    """Ground-state concurrence of the two-site chain.

    Inside ``J > 0, 0 < gamma < 1, J_z <= J`` this is the piecewise form
    1, ``(1 - J gamma/eta)/2`` at the level crossing ``eta = J + J_z``, and
    ``J gamma / eta`` beyond it. Elsewhere the equal mixture over the ground
    space is evaluated numerically.
    """
    if p.n_sites != 2:
        raise ValueError("zero_t_concurrence needs n_sites = 2")
    if _in_piecewise_region(p):
        spec = two_qubit_spectrum(p)
        eta = spec.eta
        gap = eta - (p.j_mean + p.j_z)
        if abs(gap) <= degeneracy_threshold(np.sort(spec.energies)):
            return 0.5 * (1.0 - p.j_gamma / eta)
        return 1.0 if gap < 0 else p.j_gamma / eta
    state = gibbs_state(build_hamiltonian(p), 0.0)
    return concurrence_wootters(state.rho).c


def reduced_pair_state(p: ChainParams, t, pair=(0, 1)):
    """Gibbs state of the chain and its reduction to ``pair``."""
    state = gibbs_state(build_hamiltonian(p), t)
    return state, partial_trace(state.rho, p.n_sites, pair)


def pairwise_concurrence(p: ChainParams, t, pair=(0, 1)) -> ConcurrenceValue:
    """Concurrence between two sites of the thermal chain (numeric pipeline)."""
    _, rho4 = reduced_pair_state(p, t, pair)
    return concurrence_wootters(rho4)
