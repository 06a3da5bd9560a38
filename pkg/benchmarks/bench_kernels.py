"""Benchmark the compiled kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--paths N] [--steps T]

Both backends produce bit-identical output (asserted here); the table
reports wall time and the speedup of the compiled path.  Gaussian
generation is shared between backends and timed separately for context.
"""

import argparse
import time

import numpy as np

from satrack import _kernels_py
from satrack.rng import gaussian_matrix, uniform_matrix

try:
    from satrack import _kernels_cy
except ImportError:
    _kernels_cy = None

EMPTY = np.empty(0, dtype=np.int64)


def _time(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--paths", type=int, default=512)
    parser.add_argument("--steps", type=int, default=20000)
    args = parser.parse_args()

    paths, steps = args.paths, args.steps
    t_gen, gauss = _time(gaussian_matrix, 1, list(range(paths)), steps)
    uni = uniform_matrix(2, list(range(paths)), steps)
    x0 = np.zeros(paths)

    cases = [
        ("linear_filter", "linear_filter", (gauss, x0, 0.5)),
        ("pinball", "pinball_paths", (gauss, 2.0, 2.0**-7, 0.975, -8.0, 8.0, False, EMPTY)),
        ("kohonen2", "kohonen2_paths", (uni, (0.01, 0.02), 2.0**-7, (0.0, 0.0), (1.0, 1.0), False, EMPTY)),
    ]

    total = paths * steps
    print(f"workload: {paths} paths x {steps} steps = {total:.2e} updates per kernel")
    print(f"gaussian generation (shared, numpy): {t_gen:.3f}s "
          f"({1e9 * t_gen / total:.1f} ns/draw)\n")
    print(f"{'kernel':<15}{'python':>12}{'cython':>12}{'speedup':>10}{'identical':>11}")
    for label, fn_name, fn_args in cases:
        t_py, out_py = _time(getattr(_kernels_py, fn_name), *fn_args)
        if _kernels_cy is None:
            print(f"{label:<15}{t_py:>11.3f}s{'-':>12}{'-':>10}{'-':>11}")
            continue
        t_cy, out_cy = _time(getattr(_kernels_cy, fn_name), *fn_args)
        if isinstance(out_py, tuple):
            same = all(np.array_equal(a, b) for a, b in zip(out_py, out_cy))
        else:
            same = np.array_equal(out_py, out_cy)
        print(f"{label:<15}{t_py:>11.3f}s{t_cy:>11.3f}s{t_py / t_cy:>9.1f}x{str(same):>11}")
    if _kernels_cy is None:
        print("\ncompiled kernels not built; install with a C toolchain to compare")


if __name__ == "__main__":
    main()
