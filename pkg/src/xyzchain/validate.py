"""Seeded cross-check suites behind ``xyzchain validate``.

Each suite returns a :class:`SuiteResult`; reports contain no timings, so a
fixed seed reproduces the report byte for byte.
"""

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .entanglement import (
    concurrence_from_lambdas,
    concurrence_wootters,
    concurrence_x_state,
    extract_x_elements,
    pairwise_concurrence,
    reduced_pair_state,
    two_qubit_thermal_lambdas,
    zero_t_concurrence,
)
from .linalg import partial_trace
from .model import ChainParams, build_hamiltonian, reconcile_three_qubit, two_qubit_spectrum
from .sweep import find_critical_field_zero_t
from .thermal import gibbs_state

TRIANGLE_TOL = 1e-9
ZERO_T_TOL = 5e-3
ZERO_T_T = 1e-3
ZERO_T_MIN_GAP = 0.05
MIDDLE_BRANCH_TOL = 1e-6
BC_TOL = 1e-5
SYMMETRY_TOL = 1e-10
JZ_WITNESS = 1e-3
X_FORM_TOL = 1e-12
RING_TOL = 1e-10


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_dev: float
    details: list = field(default_factory=list)

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {verdict} (max dev {self.max_dev:.1e})"


def _open_unit(rng, hi):
    """Uniform on (0, hi]."""
    return hi - rng.uniform(0.0, hi)


def draw_two_qubit(rng):
    """One draw of (J, gamma, J_z, B, T) from the standard validation box."""
    j = _open_unit(rng, 3.0)
    gamma = rng.uniform(0.0, 1.0)
    while gamma == 0.0:
        gamma = rng.uniform(0.0, 1.0)
    jz = rng.uniform(-3.0, 3.0)
    b = rng.uniform(-4.0, 4.0)
    t = _open_unit(rng, 5.0)
    return j, gamma, jz, b, t


def oracle_triangle(draws=1000, seed=0, closed_lambdas=two_qubit_thermal_lambdas):
    """Generic Wootters vs X-state form vs thermal closed form on random two-site draws."""
    rng = np.random.default_rng([seed, 1])
    worst = 0.0
    worst_at = None
    for _ in range(draws):
        j, gamma, jz, b, t = draw_two_qubit(rng)
        p = ChainParams.from_j_gamma(2, j, gamma, jz, b)
        _, rho4 = reduced_pair_state(p, t)
        generic = concurrence_wootters(rho4).c
        xform = concurrence_x_state(extract_x_elements(rho4)).c
        closed = concurrence_from_lambdas(closed_lambdas(p, t)).c
        dev = max(abs(generic - xform), abs(generic - closed), abs(xform - closed))
        if dev > worst:
            worst, worst_at = dev, (j, gamma, jz, b, t)
    details = [f"draws={draws} worst at (J, gamma, J_z, B, T)={worst_at}"]
    return SuiteResult("oracle-triangle", worst <= TRIANGLE_TOL, worst, details)


def _spectral_gap(p):
    e = np.sort(two_qubit_spectrum(p).energies)
    return e[1] - e[0]


def zero_t_limit(draws=200, seed=0):
    """Piecewise zero-temperature concurrence vs the numeric pipeline at T = 1e-3.

    Draws closer than ``ZERO_T_MIN_GAP`` to a level crossing are redrawn: there
    the finite-temperature value interpolates between branches.
    """
    rng = np.random.default_rng([seed, 2])
    worst = 0.0
    skipped = 0
    done = 0
    while done < draws:
        j = _open_unit(rng, 3.0)
        jz = _open_unit(rng, j)
        gamma = rng.uniform(0.0, 1.0)
        b = rng.uniform(-4.0, 4.0)
        p = ChainParams.from_j_gamma(2, j, gamma, jz, b)
        if gamma == 0.0 or _spectral_gap(p) < ZERO_T_MIN_GAP:
            skipped += 1
            continue
        dev = abs(zero_t_concurrence(p) - pairwise_concurrence(p, ZERO_T_T).c)
        worst = max(worst, dev)
        done += 1
    limit_ok = worst <= ZERO_T_TOL

    b_mid = math.sqrt(1.5**2 - 0.3**2)
    p = ChainParams.from_j_gamma(2, 1.0, 0.3, 0.5, b_mid)
    mixture = gibbs_state(build_hamiltonian(p), 0.0)
    c_mix = concurrence_wootters(mixture.rho).c
    c_piece = zero_t_concurrence(p)
    mid_dev = max(abs(c_mix - 0.4), abs(c_piece - 0.4))
    details = [
        f"draws={draws} redrawn_near_crossing={skipped} T={ZERO_T_T} worst={worst:.3e}",
        f"middle branch: ground degeneracy={mixture.ground_degeneracy} "
        f"C(mixture)={c_mix!r} C(piecewise)={c_piece!r}",
    ]
    passed = limit_ok and mid_dev <= MIDDLE_BRANCH_TOL and mixture.ground_degeneracy == 2
    return SuiteResult("zero-t-limit", passed, max(worst, mid_dev), details)


def critical_field():
    """Bisected B_c at T = 0 against sqrt((J + J_z)^2 - (J gamma)^2)."""
    worst = 0.0
    found = []
    for jz in (0.0, 0.5, 0.9):
        p = ChainParams.from_j_gamma(2, 1.0, 0.3, jz, 0.0)
        cp = find_critical_field_zero_t(p, 0.0, 4.0)
        exact = math.sqrt((1.0 + jz) ** 2 - 0.09)
        worst = max(worst, abs(cp.location - exact))
        found.append(cp.location)
    increasing = all(a < b for a, b in zip(found, found[1:]))
    details = [f"B_c(J_z=0, 0.5, 0.9) = {', '.join(f'{x:.6f}' for x in found)}"]
    return SuiteResult("critical-field", worst <= BC_TOL and increasing, worst, details)


def symmetry(draws=200, seed=0):
    """Invariance under J -> -J, gamma -> -gamma, B -> -B; J_z -> -J_z must break it."""
    rng = np.random.default_rng([seed, 3])
    worst = 0.0
    witness = 0.0
    for _ in range(draws):
        j, gamma, jz, b, t = draw_two_qubit(rng)
        base = pairwise_concurrence(ChainParams.from_j_gamma(2, j, gamma, jz, b), t).c
        for args in ((-j, gamma, jz, b), (j, -gamma, jz, b), (j, gamma, jz, -b)):
            other = pairwise_concurrence(ChainParams.from_j_gamma(2, *args), t).c
            worst = max(worst, abs(base - other))
        flipped = pairwise_concurrence(ChainParams.from_j_gamma(2, j, gamma, -jz, b), t).c
        witness = max(witness, abs(base - flipped))
    details = [f"draws={draws} largest J_z -> -J_z change={witness:.3e}"]
    passed = worst <= SYMMETRY_TOL and witness > JZ_WITNESS
    return SuiteResult("symmetry", passed, worst, details)


RING_POINTS = [
    (0.3, 1.0, 0.9, 1.0, 1.0),
    (0.3, 1.0, 0.9, 4.0, 0.6),
    (0.7, -1.3, 0.2, -2.5, 0.3),
    (0.0, 1.0, 1.0, 0.5, 2.0),
]


def three_qubit():
    """X-form reductions, no entanglement at B = 0, and ring translation symmetry."""
    residual = 0.0
    ring_dev = 0.0
    for gamma, j, jz, b, t in RING_POINTS:
        p = ChainParams.from_j_gamma(3, j, gamma, jz, b)
        state = gibbs_state(build_hamiltonian(p), t)
        cs = []
        for pair in ((0, 1), (1, 2), (2, 0)):
            rho4 = partial_trace(state.rho, 3, pair)
            residual = max(residual, extract_x_elements(rho4).residual)
            cs.append(concurrence_wootters(rho4).c)
        ring_dev = max(ring_dev, max(cs) - min(cs))
    zero_field = [pairwise_concurrence(ChainParams.from_j_gamma(3, 1.0, 0.3, jz, 0.0), 0.6).c
                  for jz in np.linspace(0.0, 1.5, 20)]
    details = [
        f"max off-X residual={residual:.3e}",
        f"max ring asymmetry={ring_dev:.3e}",
        f"max C at B=0, T=0.6 over 20 J_z values={max(zero_field)!r}",
    ]
    passed = residual < X_FORM_TOL and ring_dev <= RING_TOL and max(zero_field) == 0.0
    return SuiteResult("three-qubit", passed, max(residual, ring_dev), details)


SPECTRUM_POINTS = [
    (1.0, 0.3, 0.9, 1.0),
    (1.0, 0.3, 0.9, 4.0),
    (1.0, 0.3, 0.0, 0.0),
    (2.0, 0.6, -0.7, -1.3),
    (1.0, 0.0, 0.9, 1.0),
]


def three_site_spectrum():
    """Closed-form three-site eigensystem against exact diagonalization."""
    details = []
    worst = 0.0
    common = None
    for j, gamma, jz, b in SPECTRUM_POINTS:
        rep = reconcile_three_qubit(ChainParams.from_j_gamma(3, j, gamma, jz, b))
        worst = max(worst, rep["energy_max_dev"], max(rep["residual_complemented"]))
        fits = set(rep["labelings"])
        common = fits if common is None else common & fits
        details.append(
            f"J={j} gamma={gamma} J_z={jz} B={b}: energy dev {rep['energy_max_dev']:.1e}, "
            f"max residual as printed {max(rep['residual_as_printed']):.2e}, "
            f"complemented {max(rep['residual_complemented']):.1e}, "
            f"labelings that fit: {rep['labelings']}")
    convention = min(common) if len(common) == 1 else None
    details.insert(0, f"convention map: {convention}")
    return SuiteResult("three-site-spectrum", convention is not None, worst, details)


def _faulty_lambdas(p, t):
    return two_qubit_thermal_lambdas(replace(p, j_z=-p.j_z), t)


def run_all(seed=0, draws=1000, fault=False):
    """All suites in report order. ``fault`` injects a J_z sign error into the closed form."""
    closed = _faulty_lambdas if fault else two_qubit_thermal_lambdas
    return [
        oracle_triangle(draws, seed, closed),
        zero_t_limit(200, seed),
        critical_field(),
        symmetry(200, seed),
        three_qubit(),
        three_site_spectrum(),
    ]


def format_report(results, as_json=False):
    if as_json:
        payload = {
            "passed": all(r.passed for r in results),
            "suites": [
                {"name": r.name, "passed": r.passed, "max_dev": r.max_dev, "details": r.details}
                for r in results
            ],
        }
        return json.dumps(payload, indent=2)
    lines = []
    for r in results:
        lines.append(r.line())
        lines.extend(f"  {d}" for d in r.details)
    verdict = "PASS" if all(r.passed for r in results) else "FAIL"
    lines.append(f"overall: {verdict}")
    return "\n".join(lines)
