"""Command-line interface: ``xyzchain sweep | critical | validate``.

Exit codes: 0 success, 2 bad arguments, 3 numerical failure, 4 no transition
in the bracket, 5 validation failure.
"""

import argparse
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import csvio, validate
from .errors import NoTransitionError, XYZChainError
from .model import ChainParams
from .sweep import (
    BISECTION_TOL,
    EPS_ZERO,
    SCAN_POINTS,
    Axis,
    SweepSpec,
    default_threads,
    find_critical_field_zero_t,
    find_critical_temperature,
    run_sweep,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_NO_TRANSITION = 4
EXIT_VALIDATION = 5


class UsageError(Exception):
    pass


def _pair(text):
    parts = text.replace(":", ",").split(",")
    if len(parts) != 2:
        raise ValueError(f"pair {text!r} is not 'a,b'")
    return int(parts[0]), int(parts[1])


def _bracket(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"bracket {text!r} is not 'lo:hi'")
    return float(parts[0]), float(parts[1])


# Options shared by flags and config files: name -> converter.
OPTIONS = {
    "n": int,
    "j": float,
    "gamma": float,
    "jx": float,
    "jy": float,
    "jz": float,
    "b": float,
    "t": float,
    "boundary": str,
    "axis": str,
    "pair": _pair,
    "pipeline": str,
    "threads": int,
    "eps_zero": float,
    "tol": float,
    "out": str,
    "kind": str,
    "bracket": _bracket,
    "which": str,
    "resolution": int,
    "scan_out": str,
}
REPEATABLE = {"axis"}


def load_config(path):
    """Parse a ``key = value`` file (``#`` comments, repeated ``axis`` lines allowed)."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_").lower()
            if key not in OPTIONS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                converted = OPTIONS[key](value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from exc
            if key in REPEATABLE:
                values.setdefault(key, []).append(converted)
            else:
                values[key] = converted
    return values


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings for one CLI run."""

    n: int
    jx: float
    jy: float
    jz: float
    b: float
    t: Optional[float]
    boundary: Optional[str]
    axes: tuple
    pair: tuple
    pipeline: str
    threads: int
    eps_zero: float
    tol: float
    out: Optional[str]

    def params(self):
        return ChainParams(self.n, self.jx, self.jy, self.jz, self.b, self.boundary)


def resolve_config(flags, file_values=None):
    """Merge built-in defaults < config file < flags into a :class:`RunConfig`."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in flags.items() if v is not None})
    has_jg = "j" in merged or "gamma" in merged
    has_xy = "jx" in merged or "jy" in merged
    if has_jg and has_xy:
        raise UsageError("give either --j/--gamma or --jx/--jy, not both")
    if has_xy:
        jx, jy = merged.get("jx", 0.0), merged.get("jy", 0.0)
    else:
        j, gamma = merged.get("j", 1.0), merged.get("gamma", 0.0)
        jx, jy = j * (1 + gamma), j * (1 - gamma)
    try:
        axes = tuple(Axis.parse(a) for a in merged.get("axis", []))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for a in axes:
        if a.steps < 2:
            raise UsageError(f"axis {a.name} needs at least 2 steps")
    eps_zero = merged.get("eps_zero", EPS_ZERO)
    tol = merged.get("tol", BISECTION_TOL)
    if not (eps_zero > 0 and tol > 0):
        raise UsageError("tolerance overrides must be positive")
    return RunConfig(
        n=merged.get("n", 2),
        jx=jx,
        jy=jy,
        jz=merged.get("jz", 0.0),
        b=merged.get("b", 0.0),
        t=merged.get("t"),
        boundary=merged.get("boundary"),
        axes=axes,
        pair=merged.get("pair", (0, 1)),
        pipeline=merged.get("pipeline", "generic"),
        threads=merged.get("threads", default_threads()),
        eps_zero=eps_zero,
        tol=tol,
        out=merged.get("out"),
    )


def _add_model_flags(p):
    p.add_argument("--config", help="key = value file; flags override its values")
    p.add_argument("--n", type=int, help="number of sites (default 2)")
    p.add_argument("--j", type=float, help="mean XY coupling J = (Jx + Jy)/2")
    p.add_argument("--gamma", type=float, help="XY anisotropy (Jx - Jy)/(Jx + Jy)")
    p.add_argument("--jx", type=float)
    p.add_argument("--jy", type=float)
    p.add_argument("--jz", type=float)
    p.add_argument("--b", type=float, help="magnetic field")
    p.add_argument("--t", type=float, help="temperature (k_B = 1)")
    p.add_argument("--boundary", choices=["open", "periodic"])
    p.add_argument("--pair", type=_pair, help="qubit pair 'a,b' (default 0,1)")
    p.add_argument("--pipeline", choices=["generic", "closed"])
    p.add_argument("--eps-zero", dest="eps_zero", type=float)
    p.add_argument("--tol", type=float)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="xyzchain",
        description="Thermal pairwise concurrence of anisotropic Heisenberg XYZ chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="tabulate concurrence over a parameter grid")
    _add_model_flags(sw)
    sw.add_argument("--axis", action="append", help="NAME:min:max:steps (NAME in B, T, JZ, GAMMA, J)")
    sw.add_argument("--threads", type=int, help="worker thread hint (env XYZCHAIN_THREADS)")
    sw.add_argument("--out", help="CSV output path")

    cr = sub.add_parser("critical", help="locate B_c (T = 0) or T_c")
    _add_model_flags(cr)
    cr.add_argument("--kind", choices=["bc", "tc"])
    cr.add_argument("--bracket", type=_bracket, help="lo:hi")
    cr.add_argument("--which", choices=["first_above", "last_below"])
    cr.add_argument("--resolution", type=int)
    cr.add_argument("--scan-out", dest="scan_out", help="optional CSV of evaluated points")

    va = sub.add_parser("validate", help="run the oracle and symmetry suites")
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--draws", type=int, default=1000, help="oracle-triangle draws")
    va.add_argument("--self-test", action="store_true",
                    help="inject a sign error into the closed form; the run must FAIL")
    va.add_argument("--json", action="store_true", help="machine-readable report")
    return parser


def _flags(args):
    return {k: getattr(args, k, None) for k in OPTIONS}


def _config_from_args(args):
    file_values = load_config(args.config) if getattr(args, "config", None) else {}
    flags = _flags(args)
    cfg = resolve_config(flags, file_values)
    return cfg, {**file_values, **{k: v for k, v in flags.items() if v is not None}}


def cmd_sweep(args):
    cfg, _ = _config_from_args(args)
    if not cfg.out:
        raise UsageError("--out is required")
    if not cfg.axes:
        raise UsageError("at least one --axis is required")
    try:
        spec = SweepSpec(cfg.params(), cfg.axes, cfg.t, cfg.pair, cfg.pipeline)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    start = time.perf_counter()
    result = run_sweep(spec, threads=cfg.threads)
    csvio.write_sweep_csv(result, cfg.out)
    wall = time.perf_counter() - start
    shape = "x".join(str(s) for s in spec.shape)
    print(f"grid {shape} ({len(result)} points); concurrence min {result.concurrence.min():.6g} "
          f"max {result.concurrence.max():.6g}; wall {wall:.2f} s; wrote {cfg.out}")
    return EXIT_OK


def cmd_critical(args):
    cfg, merged = _config_from_args(args)
    kind = merged.get("kind")
    bracket = merged.get("bracket")
    if kind not in ("bc", "tc"):
        raise UsageError("--kind bc|tc is required")
    if bracket is None:
        raise UsageError("--bracket lo:hi is required")
    lo, hi = bracket
    if not lo < hi:
        raise UsageError("bracket must satisfy lo < hi")
    try:
        p = cfg.params()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if kind == "bc":
        if p.n_sites != 2:
            raise UsageError("--kind bc needs --n 2")
        cp = find_critical_field_zero_t(p, lo, hi, tol=cfg.tol)
        header = ("b", "concurrence")
    else:
        which = merged.get("which", "last_below")
        resolution = merged.get("resolution", SCAN_POINTS)
        pipeline = cfg.pipeline if p.n_sites == 2 else "generic"
        cp = find_critical_temperature(p, lo, hi, tol=cfg.tol, which=which,
                                       resolution=resolution, eps_zero=cfg.eps_zero,
                                       pair=cfg.pair, pipeline=pipeline)
        header = ("t", "margin")
    print(f"{cp.kind},{cp.location!r},{cp.bracket_width!r}")
    scan_out = merged.get("scan_out")
    if scan_out:
        csvio.write_rows(scan_out, header, cp.scan)
    return EXIT_OK


def cmd_validate(args):
    results = validate.run_all(seed=args.seed, draws=args.draws, fault=args.self_test)
    print(validate.format_report(results, as_json=args.json))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


COMMANDS = {"sweep": cmd_sweep, "critical": cmd_critical, "validate": cmd_validate}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"xyzchain: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoTransitionError as exc:
        print(f"xyzchain: no transition: {exc}", file=sys.stderr)
        return EXIT_NO_TRANSITION
    except (XYZChainError, ArithmeticError) as exc:
        print(f"xyzchain: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"xyzchain: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
