"""Parameter-grid sweeps and critical-point location.

Grid points are independent; :func:`run_sweep` may spread them over worker
threads but always returns records in row-major order, and each value is
computed by the same sequential code whatever the schedule, so output is
bitwise reproducible.
"""

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .entanglement import (
    closed_form_concurrence,
    concurrence_wootters,
    reduced_pair_state,
    zero_t_concurrence,
)
from .errors import NoTransitionError, SweepPointError, XYZChainError
from .model import ChainParams
from .thermal import two_qubit_log_partition

EPS_ZERO = 1e-6
BISECTION_TOL = 1e-6
SCAN_POINTS = 200
JUMP_THRESHOLD = 0.1
DEFAULT_T_MIN = 0.01
THREADS_ENV = "XYZCHAIN_THREADS"

AXIS_ALIASES = {
    "b": "b", "b_field": "b",
    "t": "t", "temperature": "t",
    "jz": "jz", "j_z": "jz",
    "gamma": "gamma", "g": "gamma",
    "j": "j",
}
PIPELINES = ("generic", "closed")


@dataclass(frozen=True)
class Axis:
    """Uniform grid ``lo..hi`` (both inclusive) over one parameter.

    ``name`` is one of ``b``, ``t``, ``jz``, ``gamma``, ``j`` (case and a few
    aliases such as ``J_z`` are accepted). A single-step axis pins the
    parameter and needs ``lo == hi``.
    """

    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        key = str(self.name).strip().lower()
        if key not in AXIS_ALIASES:
            raise ValueError(f"unknown axis parameter {self.name!r}")
        object.__setattr__(self, "name", AXIS_ALIASES[key])
        lo, hi, steps = float(self.lo), float(self.hi), int(self.steps)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("axis bounds must be finite")
        if steps == 1:
            if lo != hi:
                raise ValueError("a single-step axis needs lo == hi")
        elif steps < 2:
            raise ValueError(f"axis needs at least 2 steps, got {steps}")
        elif not lo < hi:
            raise ValueError(f"axis {self.name}: min {lo} must be below max {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "steps", steps)

    @classmethod
    def parse(cls, text):
        """Parse ``NAME:min:max:steps``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"axis {text!r} is not NAME:min:max:steps")
        name, lo, hi, steps = parts
        return cls(name, float(lo), float(hi), int(steps))

    def values(self):
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    base: ChainParams
    axes: tuple = ()
    temperature: Optional[float] = None
    pair: tuple = (0, 1)
    pipeline: str = "generic"

    def __post_init__(self):
        axes = tuple(self.axes)
        if len(axes) > 2:
            raise ValueError("at most two sweep axes")
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate sweep axes {names}")
        if "t" not in names:
            if self.temperature is None:
                raise ValueError("temperature is required when T is not an axis")
            if not self.temperature >= 0:
                raise ValueError("temperature must be >= 0")
        else:
            t_axis = axes[names.index("t")]
            if t_axis.lo < 0:
                raise ValueError("temperature axis must be >= 0")
        if self.pipeline not in PIPELINES:
            raise ValueError(f"pipeline must be one of {PIPELINES}")
        if self.pipeline == "closed" and self.base.n_sites != 2:
            raise ValueError("the closed-form pipeline is only available for two sites")
        a, b = self.pair
        if a == b or not (0 <= a < self.base.n_sites and 0 <= b < self.base.n_sites):
            raise ValueError(f"invalid qubit pair {self.pair}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "pair", (int(a), int(b)))

    @property
    def shape(self):
        return tuple(a.steps for a in self.axes)


class PointResult(NamedTuple):
    concurrence: float
    lambdas: tuple
    log_z: float


def _gamma_or_nan(p):
    try:
        return p.gamma
    except ZeroDivisionError:
        return math.nan


@dataclass
class SweepResult:
    """Row-major table of sweep records.

    Parameter columns (``j``, ``gamma``, ``jz``, ``b``, ``t``) are stored per
    point; ``lambdas`` has shape ``(points, 4)``, sorted descending per row.
    """

    spec: SweepSpec
    j: np.ndarray
    gamma: np.ndarray
    jz: np.ndarray
    b: np.ndarray
    t: np.ndarray
    concurrence: np.ndarray
    lambdas: np.ndarray
    log_z: np.ndarray
    elapsed: float = field(default=0.0, compare=False)

    def __len__(self):
        return len(self.concurrence)

    def grid(self, column="concurrence"):
        """A column reshaped to the axis shape."""
        return getattr(self, column).reshape(self.spec.shape or (1,))

    def rows(self):
        n = self.spec.base.n_sites
        a, b = self.spec.pair
        for k in range(len(self)):
            yield (n, self.j[k], self.gamma[k], self.jz[k], self.b[k], self.t[k], a, b,
                   self.concurrence[k], *self.lambdas[k], self.log_z[k])


def point_params(spec: SweepSpec, coords):
    """Chain parameters and temperature at one grid point (``coords`` by axis name)."""
    kw = {}
    if "j" in coords:
        kw["j"] = coords["j"]
    if "gamma" in coords:
        kw["gamma"] = coords["gamma"]
    if "jz" in coords:
        kw["j_z"] = coords["jz"]
    if "b" in coords:
        kw["b_field"] = coords["b"]
    p = spec.base.evolve(**kw) if kw else spec.base
    t = coords.get("t", spec.temperature)
    return p, float(t)


def evaluate_point(p: ChainParams, t, pair=(0, 1), pipeline="generic") -> PointResult:
    """Concurrence, lambdas and ln Z at one parameter point.

    ``t == 0`` always goes through the ground-space state of the numeric
    pipeline; ln Z is NaN there.
    """
    if pipeline == "closed" and t > 0:
        cv = closed_form_concurrence(p, t)
        return PointResult(cv.c, cv.lambdas, two_qubit_log_partition(p, t))
    state, rho4 = reduced_pair_state(p, t, pair)
    cv = concurrence_wootters(rho4)
    return PointResult(cv.c, cv.lambdas, state.log_partition)


def _grid_coords(spec):
    if not spec.axes:
        return [{}]
    grids = [a.values() for a in spec.axes]
    names = [a.name for a in spec.axes]
    if len(grids) == 1:
        return [{names[0]: float(x)} for x in grids[0]]
    return [{names[0]: float(x), names[1]: float(y)} for x in grids[0] for y in grids[1]]


def _evaluate_chunk(spec, chunk):
    out = []
    for coords in chunk:
        p, t = point_params(spec, coords)
        try:
            res = evaluate_point(p, t, spec.pair, spec.pipeline)
        except (XYZChainError, ArithmeticError, ValueError) as exc:
            full = {"j": p.j_mean, "gamma": _gamma_or_nan(p), "jz": p.j_z,
                    "b": p.b_field, "t": t}
            raise SweepPointError(full, exc) from exc
        out.append((p, t, res))
    return out


def default_threads():
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec, threads=None, chunk_size=256) -> SweepResult:
    """Evaluate every grid point of ``spec``.

    ``threads`` is a scheduling hint only (default from ``XYZCHAIN_THREADS``,
    else 1); it never changes the returned values or their order.
    """
    threads = default_threads() if threads is None else max(1, int(threads))
    coords = _grid_coords(spec)
    chunks = [coords[i:i + chunk_size] for i in range(0, len(coords), chunk_size)]
    start = time.perf_counter()
    if threads == 1 or len(chunks) == 1:
        parts = [_evaluate_chunk(spec, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _evaluate_chunk(spec, c), chunks))
    elapsed = time.perf_counter() - start
    records = [r for part in parts for r in part]
    n = len(records)
    cols = {k: np.empty(n) for k in ("j", "gamma", "jz", "b", "t", "concurrence", "log_z")}
    lambdas = np.empty((n, 4))
    for k, (p, t, res) in enumerate(records):
        cols["j"][k] = p.j_mean
        cols["gamma"][k] = _gamma_or_nan(p)
        cols["jz"][k] = p.j_z
        cols["b"][k] = p.b_field
        cols["t"][k] = t
        cols["concurrence"][k] = res.concurrence
        cols["log_z"][k] = res.log_z
        lambdas[k] = res.lambdas
    return SweepResult(spec=spec, lambdas=lambdas, elapsed=elapsed, **cols)


# --------------------------------------------------------------------------
# Critical points


@dataclass(frozen=True)
class CriticalPoint:
    kind: str  # "field_at_zero_t" or "temperature"
    location: float
    bracket_width: float
    detection: str  # "sign_change" or "discontinuity"
    scan: tuple = field(default=(), repr=False, compare=False)


def find_critical_field_zero_t(p: ChainParams, b_lo, b_hi, tol=BISECTION_TOL,
                               jump=JUMP_THRESHOLD) -> CriticalPoint:
    """Field where the ground-state concurrence of the two-site chain jumps.

    Bisects on the discontinuity: a point belongs to the low side while its
    concurrence stays within ``jump`` of the value at ``b_lo``.
    """
    if p.n_sites != 2:
        raise ValueError("critical field search needs n_sites = 2")
    if not b_lo < b_hi:
        raise ValueError("bracket must satisfy b_lo < b_hi")

    def c_at(b):
        return zero_t_concurrence(p.evolve(b_field=b))

    c_lo = c_at(b_lo)
    c_hi = c_at(b_hi)
    scan = [(b_lo, c_lo), (b_hi, c_hi)]
    if abs(c_hi - c_lo) <= jump:
        raise NoTransitionError(
            f"zero-temperature concurrence changes by {abs(c_hi - c_lo):.3g} <= {jump} "
            f"across [{b_lo}, {b_hi}]")
    lo, hi = float(b_lo), float(b_hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        c_mid = c_at(mid)
        scan.append((mid, c_mid))
        if abs(c_mid - c_lo) <= jump:
            lo = mid
        else:
            hi = mid
    if abs(c_at(hi) - c_at(lo)) <= jump:
        raise NoTransitionError("concurrence is continuous across the final bracket")
    return CriticalPoint("field_at_zero_t", 0.5 * (lo + hi), hi - lo, "discontinuity",
                         tuple(sorted(scan)))


def concurrence_vs_temperature(p: ChainParams, pair=(0, 1), pipeline=None):
    """Callable ``t -> ConcurrenceValue`` for fixed chain parameters."""
    if pipeline is None:
        pipeline = "generic"

    def f(t):
        if pipeline == "closed" and t > 0:
            return closed_form_concurrence(p, t)
        _, rho4 = reduced_pair_state(p, t, pair)
        return concurrence_wootters(rho4)

    return f


def _refine_dip(margin, t0, t1, t2):
    """Minimize the concurrence margin on ``[t0, t2]`` around a grid minimum at ``t1``."""
    res = minimize_scalar(margin, bounds=(t0, t2), method="bounded",
                          options={"xatol": 1e-12 * max(1.0, t2), "maxiter": 200})
    if res.fun < margin(t1):
        return float(res.x), float(res.fun)
    return t1, margin(t1)


def _bisect_edge(entangled, a, b, tol):
    """Shrink ``[a, b]`` (indicator differs at the ends) to width <= tol."""
    ea = entangled(a)
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if entangled(mid) == ea:
            a = mid
        else:
            b = mid
    return a, b


class Interval(NamedTuple):
    lo: float
    hi: float


def _scan(p, t_lo, t_hi, resolution, eps_zero, pair, pipeline):
    """Sorted samples ``(t, margin)`` with grid dips refined toward their minimum."""
    f = concurrence_vs_temperature(p, pair, pipeline)

    def margin(t):
        return f(t).margin

    ts = np.linspace(t_lo, t_hi, resolution)
    ms = [margin(float(t)) for t in ts]
    samples = list(zip((float(t) for t in ts), ms))
    for k in range(1, len(ts) - 1):
        if ms[k] > eps_zero and ms[k] <= ms[k - 1] and ms[k] <= ms[k + 1]:
            t_min, m_min = _refine_dip(margin, float(ts[k - 1]), float(ts[k]), float(ts[k + 1]))
            if m_min <= eps_zero:
                samples.append((t_min, m_min))
    samples.sort()
    return samples, margin


def _crossings(p, t_lo, t_hi, tol, resolution, eps_zero, pair, pipeline):
    samples, margin = _scan(p, t_lo, t_hi, resolution, eps_zero, pair, pipeline)

    def entangled(t):
        return margin(t) > eps_zero

    flags = [m > eps_zero for _, m in samples]
    edges = []
    for (ta, _), (tb, _), fa, fb in zip(samples, samples[1:], flags, flags[1:]):
        if fa != fb:
            a, b = _bisect_edge(entangled, ta, tb, tol)
            edges.append((a, b, fa))  # fa True: entanglement vanishes at this edge
    return samples, flags, edges


def detect_revival(p: ChainParams, t_range=(DEFAULT_T_MIN, 3.0), resolution=SCAN_POINTS,
                   eps_zero=EPS_ZERO, tol=BISECTION_TOL, pair=(0, 1), pipeline=None):
    """Maximal temperature intervals with concurrence above ``eps_zero``.

    Two or more intervals signal a revival. Grid minima are refined by a
    bounded minimization so that zero-concurrence windows narrower than the
    grid spacing are still found.
    """
    t_lo, t_hi = map(float, t_range)
    if not 0 <= t_lo < t_hi:
        raise ValueError("t_range must satisfy 0 <= lo < hi")
    if resolution < 100:
        raise ValueError("resolution must be at least 100 points")
    samples, flags, edges = _crossings(p, t_lo, t_hi, tol, resolution, eps_zero, pair, pipeline)
    intervals = []
    start = t_lo if flags[0] else None
    for a, b, vanishing in edges:
        edge = 0.5 * (a + b)
        if vanishing:
            intervals.append(Interval(start, edge))
            start = None
        else:
            start = edge
    if start is not None:
        intervals.append(Interval(start, t_hi))
    return intervals


def find_critical_temperature(p: ChainParams, t_lo, t_hi, tol=BISECTION_TOL,
                              which="last_below", resolution=SCAN_POINTS,
                              eps_zero=EPS_ZERO, pair=(0, 1), pipeline=None) -> CriticalPoint:
    """Temperature where the concurrence crosses ``eps_zero``.

    The bracket is scanned on ``resolution`` points (dips refined as in
    :func:`detect_revival`) and each crossing bisected to ``tol``.
    ``which="first_above"`` returns the lowest crossing above ``t_lo``,
    ``"last_below"`` the highest below ``t_hi``.
    """
    if which not in ("first_above", "last_below"):
        raise ValueError("which must be 'first_above' or 'last_below'")
    if not 0 <= t_lo < t_hi:
        raise ValueError("bracket must satisfy 0 <= t_lo < t_hi")
    samples, _, edges = _crossings(p, float(t_lo), float(t_hi), tol, resolution, eps_zero,
                                   pair, pipeline)
    if not edges:
        raise NoTransitionError(f"no concurrence crossing in [{t_lo}, {t_hi}]")
    a, b, _ = edges[0] if which == "first_above" else edges[-1]
    return CriticalPoint("temperature", 0.5 * (a + b), b - a, "sign_change", tuple(samples))
