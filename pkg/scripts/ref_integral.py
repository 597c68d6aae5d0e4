#!/usr/bin/env python3
"""Derivation of the committed reference integral for the oscillatory surface.

Midpoint quadrature of sin(20x^2 + 10y) sin(pi x) sin(pi y) on [0,1)^2 at
G = 2048, 4096, 8192, with Richardson extrapolation of consecutive levels as
the consistency check.  Midpoint error is O(G^-2); the extrapolated values
kill that term and must agree to 1e-8 for the constant to be committed.

Run:  python scripts/ref_integral.py
"""

import numpy as np


def f(x, y):
    return np.sin(20.0 * x**2 + 10.0 * y) * np.sin(np.pi * x) * np.sin(np.pi * y)


def midpoint(g, chunk=256):
    xs = (np.arange(g) + 0.5) / g
    total = 0.0
    for start in range(0, g, chunk):
        ys = xs[start : start + chunk]
        total += float(f(xs[None, :], ys[:, None]).sum())
    return total / (g * g)


def main():
    values = {g: midpoint(g) for g in (2048, 4096, 8192)}
    for g, v in values.items():
        print(f"midpoint {g:5d}: {v!r}")
    r_lo = (4.0 * values[4096] - values[2048]) / 3.0
    r_hi = (4.0 * values[8192] - values[4096]) / 3.0
    print(f"richardson 2048/4096: {r_lo!r}")
    print(f"richardson 4096/8192: {r_hi!r}")
    print(f"midpoint 4096 vs 8192 gap: {abs(values[8192] - values[4096]):.3e}")
    print(f"richardson gap:           {abs(r_hi - r_lo):.3e}")
    assert abs(r_hi - r_lo) < 1e-8, "extrapolated values disagree"
    print(f"commit constant: {r_hi!r}")


if __name__ == "__main__":
    main()
