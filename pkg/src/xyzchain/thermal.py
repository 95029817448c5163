"""Gibbs states ``rho = exp(-H/T) / Z`` with k_B = 1."""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import Spectrum, hermitian_eig
from .model import ChainParams

# Below this temperature the Boltzmann factors are replaced by the T -> 0 limit.
MIN_TEMPERATURE = 1e-8


def degeneracy_threshold(eigenvalues):
    """Energy window treated as one level when picking the ground space."""
    spread = float(eigenvalues[-1] - eigenvalues[0])
    return 1e-9 * max(1.0, spread)


@dataclass(frozen=True)
class ThermalState:
    """Density matrix at temperature ``temperature``.

    ``log_partition`` is ``ln Z`` with the ground energy shift restored; it
    is NaN at exactly ``T = 0``. ``low_t_fallback`` is set when a positive
    temperature below :data:`MIN_TEMPERATURE` was handled by the ground-space
    limit.
    """

    rho: np.ndarray
    temperature: float
    log_partition: float
    low_t_fallback: bool = False
    ground_degeneracy: int = 0


def boltzmann_weights(energies, t):
    """Normalized weights and ``ln Z`` for ascending ``energies`` at ``t > 0``."""
    e0 = energies[0]
    x = np.exp(-(energies - e0) / t)
    total = x.sum()
    return x / total, math.log(total) - e0 / t


def gibbs_state(h, t, *, spectrum: Spectrum = None) -> ThermalState:
    """Thermal state of Hamiltonian ``h`` at temperature ``t >= 0``.

    At ``t == 0`` (and for ``0 < t < MIN_TEMPERATURE``) the state is the
    equal mixture over the ground eigenspace, which is the ``T -> 0+`` limit.
    A precomputed ``spectrum`` of ``h`` may be passed to skip diagonalization.
    """
    t = float(t)
    if not t >= 0.0:
        raise ValueError(f"temperature must be >= 0, got {t}")
    if spectrum is None:
        spectrum = hermitian_eig(h)
    energies, vecs = spectrum
    if t >= MIN_TEMPERATURE:
        weights, log_z = boltzmann_weights(energies, t)
        rho = (vecs * weights) @ vecs.conj().T
        return ThermalState(rho, t, log_z)
    g = int(np.count_nonzero(energies - energies[0] <= degeneracy_threshold(energies)))
    ground = vecs[:, :g]
    rho = ground @ ground.conj().T / g
    if t > 0.0:
        with np.errstate(over="ignore"):  # ln Z may legitimately be +/-inf here
            log_z = float(math.log(g) - energies[0] / t)
        return ThermalState(rho, t, log_z, low_t_fallback=True, ground_degeneracy=g)
    return ThermalState(rho, 0.0, math.nan, ground_degeneracy=g)


def _logsumexp(xs):
    m = max(xs)
    return m + math.log(math.fsum(math.exp(x - m) for x in xs))


def two_qubit_log_partition(p: ChainParams, t):
    """``ln Z`` of the two-site chain from the closed form, stable at low ``t``."""
    if p.n_sites != 2:
        raise ValueError("closed-form partition function needs n_sites = 2")
    if not t > 0:
        raise ValueError(f"temperature must be > 0, got {t}")
    beta = 1.0 / t
    eta = math.hypot(p.b_field, p.j_gamma)
    a = 0.5 * beta * p.j_z
    j = p.j_mean
    return _logsumexp([a + beta * j, a - beta * j, -a + beta * eta, -a - beta * eta])


def two_qubit_partition_function(p: ChainParams, t):
    """Z = 2 (exp(-J_z/2T) cosh(eta/T) + exp(J_z/2T) cosh(J/T)) for the two-site chain.

    Overflows to ``inf`` at very low ``t``; use :func:`two_qubit_log_partition` there.
    """
    if p.n_sites != 2:
        raise ValueError("closed-form partition function needs n_sites = 2")
    if not t > 0:
        raise ValueError(f"temperature must be > 0, got {t}")
    beta = 1.0 / t
    eta = math.hypot(p.b_field, p.j_gamma)
    a = 0.5 * beta * p.j_z
    try:
        return 2.0 * (math.exp(-a) * math.cosh(beta * eta) + math.exp(a) * math.cosh(beta * p.j_mean))
    except OverflowError:
        return math.inf
