import math

import numpy as np
import pytest

from xyzchain.entanglement import closed_form_concurrence, pairwise_concurrence
from xyzchain.errors import NoTransitionError, SweepPointError
from xyzchain.model import ChainParams
from xyzchain import sweep
from xyzchain.sweep import (
    Axis,
    SweepSpec,
    detect_revival,
    find_critical_field_zero_t,
    find_critical_temperature,
    run_sweep,
)

BASE2 = ChainParams.from_j_gamma(2, 1.0, 0.3, 0.0, 1.1)


def test_axis_parse_and_values():
    a = Axis.parse("J_z:0:1:5")
    assert a.name == "jz"
    assert np.array_equal(a.values(), np.linspace(0, 1, 5))


@pytest.mark.parametrize("text", ["B:1:0:5", "B:0:1:1", "B:0:1", "Q:0:1:3", "B:0:inf:3"])
def test_axis_rejects(text):
    with pytest.raises(ValueError):
        Axis.parse(text)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(BASE2, (Axis("b", 0, 1, 3),))  # no temperature
    with pytest.raises(ValueError):
        SweepSpec(BASE2, (Axis("b", 0, 1, 3), Axis("B", 0, 2, 3)), temperature=1.0)
    with pytest.raises(ValueError):
        SweepSpec(ChainParams(3, 1, 1), (Axis("b", 0, 1, 3),), temperature=1.0, pipeline="closed")
    with pytest.raises(ValueError):
        SweepSpec(BASE2, (Axis("b", 0, 1, 3),), temperature=1.0, pair=(0, 2))


def test_one_by_one_grid():
    spec = SweepSpec(BASE2, (Axis("b", 1.1, 1.1, 1), Axis("t", 0.5, 0.5, 1)))
    res = run_sweep(spec)
    assert len(res) == 1
    assert res.concurrence[0] == pairwise_concurrence(BASE2, 0.5).c


def test_row_major_order():
    spec = SweepSpec(BASE2, (Axis("b", 0, 2, 3), Axis("t", 0.5, 1.5, 4)))
    res = run_sweep(spec)
    assert res.grid().shape == (3, 4)
    assert np.array_equal(res.b, np.repeat([0.0, 1.0, 2.0], 4))
    assert np.array_equal(res.t, np.tile(np.linspace(0.5, 1.5, 4), 3))
    for k in range(len(res)):
        p = BASE2.evolve(b_field=res.b[k])
        assert res.concurrence[k] == pairwise_concurrence(p, res.t[k]).c


def test_schedule_independence():
    spec = SweepSpec(BASE2, (Axis("b", 0, 4, 17), Axis("t", 0.01, 2, 15)))
    serial = run_sweep(spec, threads=1)
    threaded = run_sweep(spec, threads=4, chunk_size=7)
    for col in ("concurrence", "lambdas", "log_z", "b", "t"):
        assert np.array_equal(getattr(serial, col), getattr(threaded, col))


def test_closed_pipeline():
    spec = SweepSpec(BASE2, (Axis("t", 0.0, 2.0, 9),), pipeline="closed")
    res = run_sweep(spec)
    assert math.isnan(res.log_z[0])
    for k in range(1, len(res)):
        assert res.concurrence[k] == closed_form_concurrence(BASE2, res.t[k]).c


def test_sweep_failure_reports_coordinates(monkeypatch):
    def boom(p, t, pair, pipeline):
        if p.b_field > 0.5:
            raise FloatingPointError("synthetic")
        return sweep.PointResult(0.0, (0.25,) * 4, 0.0)

    monkeypatch.setattr(sweep, "evaluate_point", boom)
    spec = SweepSpec(BASE2, (Axis("b", 0, 1, 3),), temperature=0.5)
    with pytest.raises(SweepPointError) as info:
        run_sweep(spec)
    assert info.value.coords["b"] == 1.0


def test_three_site_zero_field_line():
    base = ChainParams.from_j_gamma(3, 1.0, 0.3, 0.0, 0.0)
    spec = SweepSpec(base, (Axis("b", 0, 2, 5), Axis("jz", 0, 1.5, 6)), temperature=0.6)
    grid = run_sweep(spec).grid()
    assert np.all(grid[0] == 0.0)
    assert grid.max() > 0.0


@pytest.mark.parametrize("jz, expected", [(0.0, 0.953939), (0.5, 1.469694), (0.9, 1.876166)])
def test_critical_field(jz, expected):
    cp = find_critical_field_zero_t(BASE2.evolve(j_z=jz), 0.0, 4.0)
    assert cp.kind == "field_at_zero_t" and cp.detection == "discontinuity"
    assert cp.bracket_width <= 1e-6
    assert cp.location == pytest.approx(expected, abs=1e-5)


def test_critical_field_random_draws():
    rng = np.random.default_rng(5)
    tol = 1e-7
    for _ in range(100):
        j = rng.uniform(0.1, 3)
        gamma = rng.uniform(0.01, 0.99)
        jz = j - rng.uniform(0, j)
        exact = math.sqrt((j + jz) ** 2 - (j * gamma) ** 2)
        cp = find_critical_field_zero_t(ChainParams.from_j_gamma(2, j, gamma, jz), 0.0, exact + 2, tol)
        assert abs(cp.location - exact) < 10 * tol


def test_critical_field_no_transition():
    with pytest.raises(NoTransitionError):
        find_critical_field_zero_t(BASE2, 2.0, 4.0)


def test_revival_present():
    intervals = detect_revival(BASE2)
    assert len(intervals) >= 2
    assert all(a.hi < b.lo for a, b in zip(intervals, intervals[1:]))


def test_no_revival_when_field_below_critical():
    intervals = detect_revival(BASE2.evolve(j_z=0.9))
    assert len(intervals) == 1
    assert intervals[0].lo == sweep.DEFAULT_T_MIN
    assert pairwise_concurrence(BASE2.evolve(j_z=0.9), 1e-3).c == pytest.approx(1.0, abs=1e-4)


def test_no_revival_without_anisotropy():
    p = ChainParams.from_j_gamma(2, 1.0, 0.0, 0.0, 4.0)
    assert len(detect_revival(p, (0.01, 5.0))) <= 1


@pytest.mark.parametrize("factor", [0.1, 1.0, 10.0])
def test_interval_count_stable_in_eps_zero(factor):
    for p in (BASE2, BASE2.evolve(b_field=4.0, j_z=0.9), BASE2.evolve(j_z=0.5)):
        ref = len(detect_revival(p))
        assert len(detect_revival(p, eps_zero=sweep.EPS_ZERO * factor)) == ref


def test_revival_edges_match_critical_temperature():
    p = BASE2.evolve(b_field=4.0, j_z=0.9)
    intervals = detect_revival(p)
    first = find_critical_temperature(p, 0.01, 3.0, which="first_above")
    last = find_critical_temperature(p, 0.01, 3.0, which="last_below")
    spacing = (3.0 - 0.01) / 199
    assert abs(first.location - intervals[0].hi) < spacing
    assert abs(last.location - intervals[-1].hi) < spacing
    assert last.bracket_width <= 1e-6


def test_critical_temperature_increases_with_jz():
    tcs = [find_critical_temperature(BASE2.evolve(j_z=jz), 0.01, 3.0).location
           for jz in (0.0, 0.2, 0.5, 0.9)]
    assert all(a < b for a, b in zip(tcs, tcs[1:]))


def test_critical_temperature_errors():
    with pytest.raises(NoTransitionError):
        find_critical_temperature(BASE2, 2.0, 3.0)
    with pytest.raises(ValueError):
        find_critical_temperature(BASE2, 1.0, 0.5)
    with pytest.raises(ValueError):
        detect_revival(BASE2, resolution=50)
