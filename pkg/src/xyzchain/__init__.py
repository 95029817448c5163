"""Thermal pairwise entanglement of anisotropic Heisenberg XYZ chains."""

from .entanglement import (
    ConcurrenceValue,
    XStateElements,
    closed_form_concurrence,
    concurrence_wootters,
    concurrence_x_state,
    extract_x_elements,
    pairwise_concurrence,
    zero_t_concurrence,
)
from .errors import (
    ConvergenceError,
    InvalidStateError,
    NoTransitionError,
    NonHermitianError,
    NotXStateError,
    SweepPointError,
    XYZChainError,
)
from .linalg import KERNEL, hermitian_eig, kron, partial_trace
from .model import Boundary, ChainParams, build_hamiltonian
from .sweep import (
    Axis,
    SweepSpec,
    detect_revival,
    find_critical_field_zero_t,
    find_critical_temperature,
    run_sweep,
)
from .thermal import ThermalState, gibbs_state

__version__ = "0.1.0"
