"""Pure NumPy fallback kernels; same contracts as the compiled module.

The sweep precomputes all embedding rows up front and then loops in Python,
so it is correct everywhere but roughly two orders of magnitude slower than
the compiled kernels on long runs (see benchmarks/bench_kernels.py).
"""

from __future__ import annotations

import numpy as np

from mhkz.dyadic import dim
from mhkz.embedding import embed_block


def backend_name() -> str:
    return "python"


def kaczmarz_sweep(v, xs, ys, targets, m, w_ref=None):
    """Project v onto each sample's hyperplane in order, updating in place.

    Returns the squared distances to w_ref after every step (length l+1,
    starting at step 0) when w_ref is given, else None.
    """
    if v.shape != (dim(m),):
        raise ValueError("coefficient vector length does not match level")
    indices, coefs = embed_block(xs, ys, m)
    inv_norm_sq = 1.0 / (1.0 + 0.5 * m)
    trace = None
    if w_ref is not None:
        if w_ref.shape != v.shape:
            raise ValueError("reference vector length mismatch")
        trace = np.empty(len(xs) + 1)
        d = v - w_ref
        trace[0] = d @ d
    for i in range(len(xs)):
        rows = indices[i]
        c = coefs[i]
        residual = targets[i] - c @ v[rows]
        v[rows] += (residual * inv_norm_sq) * c
        if trace is not None:
            d = v - w_ref
            trace[i + 1] = d @ d
    return trace


def evaluate_many(v, xs, ys, m, offset=0.0):
    """Embedding inner products of each point against v, plus offset."""
    if v.shape != (dim(m),):
        raise ValueError("coefficient vector length does not match level")
    indices, coefs = embed_block(xs, ys, m)
    return (coefs * v[indices]).sum(axis=1) + offset
