#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [--repeats 7]

The same pairs are selected at import time by the SRLED_NUMBA env flag;
this script calls both implementations directly so one run shows both
columns. The AR(1) fallback is scipy.signal.lfilter, which is already
compiled; the elementwise kernels compare against vectorized numpy.
"""

import argparse
import time

import numpy as np

from srled import kernels


def best_of(func, repeats, *args):
    func(*args)  # warm up / JIT compile
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        func(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    omega = rng.uniform(-40.0, 40.0, 200_000)
    innovations = rng.standard_normal(1_000_000)
    weights = rng.uniform(0.0, 1.0, 600)
    matrix = np.ascontiguousarray(rng.uniform(0.0, 1.0, (600, 600)))

    cases = [
        ("loop_abs2 (200k pts)",
         kernels.loop_abs2_numba, kernels.loop_abs2_numpy,
         (omega, 1.068, 1.0)),
        ("commutator_vals (200k pts)",
         kernels.commutator_vals_numba, kernels.commutator_vals_numpy,
         (omega, 1.0, 1.068, 1.068, 1.0)),
        ("lorentzian_vals (200k pts)",
         kernels.lorentzian_vals_numba, kernels.lorentzian_vals_numpy,
         (omega, 0.11, 1.65)),
        ("ar1_path (1M steps)",
         kernels.ar1_path_numba, kernels.ar1_path_numpy,
         (innovations, 0.999, 0.05, 0.0)),
        ("cumulant_reduce (600x600)",
         kernels.cumulant_reduce_numba, kernels.cumulant_reduce_numpy,
         (weights, matrix)),
    ]

    print(f"{'kernel':34s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
    for name, fn_nb, fn_np, fargs in cases:
        t_nb = best_of(fn_nb, args.repeats, *fargs)
        t_np = best_of(fn_np, args.repeats, *fargs)
        print(f"{name:34s} {t_nb * 1e3:10.3f}ms {t_np * 1e3:10.3f}ms {t_np / t_nb:8.2f}x")


if __name__ == "__main__":
    main()
