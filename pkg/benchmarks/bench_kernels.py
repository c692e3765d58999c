"""Time the numba kernels against the pure-numpy fallbacks.

Both implementations are importable in one process regardless of
INCRED_DISABLE_NUMBA, so the comparison runs side by side.

    python benchmarks/bench_kernels.py [--size N] [--repeat R]
"""

import argparse
import time

import numpy as np

from intrinsic_credibility import _accel, simulation, special


def best_of(fn, args, repeat):
    fn(*args)  # warm-up, triggers compilation
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not _accel.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed")
    if not _accel.USE_NUMBA:
        raise SystemExit("unset INCRED_DISABLE_NUMBA to benchmark the numba kernels")

    rng = np.random.default_rng(0)
    n = args.size
    x = rng.normal(scale=3.0, size=n)
    p = rng.uniform(1e-12, 1 - 1e-12, size=n)
    chi = rng.exponential(4.0, size=n)
    z = rng.standard_normal((2, n))

    cases = [
        ("normal cdf", special.cdf_numpy, special.cdf_numba, (x,)),
        ("normal quantile", special.quantile_numpy, special.quantile_numba, (p,)),
        ("chi2(1) upper tail", special.chisq1_upper_tail_numpy, special.chisq1_upper_tail_numba, (chi,)),
        ("flip count", simulation.count_flips_numpy, simulation.count_flips_numba, (z[0], z[1], 1.2, 0.8)),
    ]
    print(f"n = {n:,}, best of {args.repeat}")
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name, slow, fast, inputs in cases:
        a = best_of(slow, inputs, args.repeat)
        b = best_of(fast, inputs, args.repeat)
        print(f"{name:<20}{a * 1e3:>12.1f}{b * 1e3:>12.1f}{a / b:>9.1f}x")


if __name__ == "__main__":
    main()
