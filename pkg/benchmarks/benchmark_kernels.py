#!/usr/bin/env python3
"""Benchmark the autocorrelation phase-sum kernel: numba vs pure numpy.

Usage: python benchmarks/benchmark_kernels.py [--levels N] [--samples N]
"""

import argparse
import time

import numpy as np

from starkrev import kernels


def bench(fn, weights, omegas, times, repeats=7, warmup=2):
    for _ in range(warmup):
        fn(weights, omegas, times)
    best = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(weights, omegas, times)
        best.append(time.perf_counter() - t0)
    return min(best), np.median(best)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--levels", type=int, default=72)
    ap.add_argument("--samples", type=int, default=200_000)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    weights = rng.random(args.levels)
    weights /= weights.sum()
    omegas = rng.normal(scale=1e-3, size=args.levels)
    times = np.arange(args.samples) * 1700.0

    print(f"levels={args.levels}  samples={args.samples}")
    results = {}
    t_min, t_med = bench(kernels.autocorr_series_numpy, weights, omegas, times)
    results["numpy"] = t_min
    print(f"numpy  min {t_min * 1e3:9.2f} ms   median {t_med * 1e3:9.2f} ms")
    if kernels.HAVE_NUMBA:
        t_min, t_med = bench(kernels.autocorr_series_numba, weights, omegas, times)
        results["numba"] = t_min
        print(f"numba  min {t_min * 1e3:9.2f} ms   median {t_med * 1e3:9.2f} ms")
        print(f"speedup (numpy/numba): {results['numpy'] / results['numba']:.2f}x")
        a = kernels.autocorr_series_numpy(weights, omegas, times)
        b = kernels.autocorr_series_numba(weights, omegas, times)
        print(f"max |difference|: {np.max(np.abs(a - b)):.2e}")
    else:
        print("numba not available; only the numpy path was timed")
    print(f"active backend by default: {kernels.active_backend()}")


if __name__ == "__main__":
    main()
