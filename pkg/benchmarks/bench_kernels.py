#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the Kaczmarz sweep at the default sample budgets for m = 8 and m = 10
and batch evaluation at m = 7, then prints per-backend timings and the
speedup.  Run:  python benchmarks/bench_kernels.py
"""

import math
import time

import numpy as np

from mhkz import _pykernels
from mhkz.dyadic import dim

try:
    from mhkz import _ckernels
except ImportError:
    _ckernels = None


def budget(m, c1=8.0):
    n = 1 << m
    return math.ceil(c1 * n * math.log(n) ** 2)


def time_sweep(impl, m, steps, repeats=3):
    rng = np.random.default_rng(1)
    xs, ys = rng.random(steps), rng.random(steps)
    targets = rng.standard_normal(steps)
    best = math.inf
    for _ in range(repeats):
        v = np.zeros(dim(m))
        started = time.perf_counter()
        impl.kaczmarz_sweep(v, xs, ys, targets, m)
        best = min(best, time.perf_counter() - started)
    return best


def time_evaluate(impl, m, points, repeats=3):
    rng = np.random.default_rng(2)
    v = rng.standard_normal(dim(m))
    xs, ys = rng.random(points), rng.random(points)
    best = math.inf
    for _ in range(repeats):
        started = time.perf_counter()
        impl.evaluate_many(v, xs, ys, m)
        best = min(best, time.perf_counter() - started)
    return best


def main():
    cases = [
        ("sweep m=8", time_sweep, (8, budget(8))),
        ("sweep m=10", time_sweep, (10, budget(10))),
        ("evaluate m=7 (2e5 pts)", time_evaluate, (7, 200_000)),
    ]
    print(f"{'case':24s} {'python':>12s} {'compiled':>12s} {'speedup':>9s}")
    for name, timer, args in cases:
        py = timer(_pykernels, *args)
        if _ckernels is None:
            print(f"{name:24s} {py * 1e3:10.1f}ms {'n/a':>12s} {'n/a':>9s}")
            continue
        cy = timer(_ckernels, *args)
        print(f"{name:24s} {py * 1e3:10.1f}ms {cy * 1e3:10.2f}ms {py / cy:8.1f}x")
    if _ckernels is None:
        print("compiled kernels not built; showing fallback only")


if __name__ == "__main__":
    main()
