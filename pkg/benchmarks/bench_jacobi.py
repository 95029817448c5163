"""Compare the compiled and pure-Python Jacobi kernels.

Usage: python3 benchmarks/bench_jacobi.py [--repeat N] [--sweep]
"""

import argparse
import time

import numpy as np

from xyzchain import linalg
from xyzchain.model import ChainParams, build_hamiltonian
from xyzchain.sweep import Axis, SweepSpec, run_sweep


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    cases = [("2-site H", build_hamiltonian(ChainParams.from_j_gamma(2, 1.0, 0.3, 0.5, 1.1))),
             ("3-site H", build_hamiltonian(ChainParams.from_j_gamma(3, 1.0, 0.3, 0.9, 1.0))),
             ("6-site H", build_hamiltonian(ChainParams.from_j_gamma(6, 1.0, 0.3, 0.9, 1.0)))]
    cases += [(f"random {d}x{d}", random_hermitian(rng, d)) for d in (16, 128)]
    kernels = sorted(linalg.KERNELS)
    print(f"{'matrix':<14}" + "".join(f"{k:>14}" for k in kernels) + f"{'speedup':>10}")
    for name, a in cases:
        t = {k: best_of(lambda: linalg.hermitian_eig(a, kernel=k), repeat) for k in kernels}
        row = f"{name:<14}" + "".join(f"{t[k] * 1e3:>11.3f} ms" for k in kernels)
        if "cython" in t:
            row += f"{t['python'] / t['cython']:>9.1f}x"
        print(row)


def bench_sweep():
    spec = SweepSpec(ChainParams.from_j_gamma(2, 1.0, 0.3),
                     (Axis("b", 0, 4, 41), Axis("t", 0.01, 2, 40)))
    saved = linalg.KERNEL
    try:
        for k in sorted(linalg.KERNELS):
            linalg.KERNEL = k
            res = run_sweep(spec)
            print(f"sweep 41x40 with {k:<7} kernel: {res.elapsed:.2f} s "
                  f"({res.elapsed / len(res) * 1e3:.3f} ms/point)")
    finally:
        linalg.KERNEL = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--sweep", action="store_true", help="also time a small concurrence sweep")
    args = parser.parse_args()
    print(f"available kernels: {', '.join(sorted(linalg.KERNELS))} (default {linalg.KERNEL})")
    bench_kernels(args.repeat)
    if args.sweep:
        bench_sweep()


if __name__ == "__main__":
    main()
