"""Randomized Kaczmarz solvers: generic dense rows and the sparse embedded form.

Each step projects the iterate onto the hyperplane of one sampled row.  For
the embedded system every row has squared norm exactly 1 + m/2, so the
sparse step divides by that constant and touches only m+1 coordinates.  The
iteration is strictly sequential; independent runs may execute in parallel
but a run owns its coefficient vector exclusively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mhkz import kernels
from mhkz import rng as rngmod
from mhkz.embedding import CoefVector, SparseEmbedding, axpy_into, dot
from mhkz.samples import SampleSet


@dataclass
class KaczmarzConfig:
    """Iteration budget and sampling behavior of one solver run.

    With with_replacement=False (default) the samples are consumed once
    each, in order, and iterations must not exceed the sample count.  With
    with_replacement=True, iterations indices are drawn uniformly from the
    sample set on the dedicated index substream of seed.
    """

    iterations: int
    seed: object = 0
    initial: CoefVector | None = None
    with_replacement: bool = False

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")


@dataclass
class ConvergenceTrace:
    """Squared distance to a reference vector after each step, k = 0 first."""

    sq_errors: np.ndarray

    def __len__(self) -> int:
        return len(self.sq_errors)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("k,sq_error\n")
            for k, value in enumerate(self.sq_errors):
                fh.write(f"{k},{float(value)!r}\n")


def _check_equal_row_norms(rows: np.ndarray) -> np.ndarray:
    norms_sq = (rows * rows).sum(axis=1)
    norms = np.sqrt(norms_sq)
    mean = norms.mean()
    if np.abs(norms - mean).max() > 1e-9 * max(1.0, mean):
        raise ValueError("rows must all have the same Euclidean norm")
    return norms_sq


def kaczmarz_dense(rows, b, row_indices, v0) -> np.ndarray:
    """Sequential hyperplane projections onto the sampled rows.

    rows must all carry the same Euclidean norm (checked, tolerance 1e-9);
    row_indices is the explicit sequence of sampled row numbers.
    """
    rows = np.asarray(rows, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if rows.ndim != 2 or b.shape != (rows.shape[0],):
        raise ValueError("rows must be (N, n) with b of length N")
    norms_sq = _check_equal_row_norms(rows)
    v = np.array(v0, dtype=np.float64, copy=True)
    n_rows = rows.shape[0]
    for i in row_indices:
        i = int(i)
        if not 0 <= i < n_rows:
            raise ValueError(f"row index {i} out of range 0..{n_rows - 1}")
        row = rows[i]
        v += ((b[i] - row @ v) / norms_sq[i]) * row
    return v


def kaczmarz_dense_with_trace(rows, b, row_indices, v0, ref) -> tuple[np.ndarray, ConvergenceTrace]:
    """kaczmarz_dense plus the squared-distance trace to a reference vector."""
    rows = np.asarray(rows, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    norms_sq = _check_equal_row_norms(rows)
    ref = np.asarray(ref, dtype=np.float64)
    v = np.array(v0, dtype=np.float64, copy=True)
    trace = np.empty(len(row_indices) + 1)
    d = v - ref
    trace[0] = d @ d
    for step, i in enumerate(row_indices, start=1):
        row = rows[int(i)]
        v += ((b[int(i)] - row @ v) / norms_sq[int(i)]) * row
        d = v - ref
        trace[step] = d @ d
    return v, ConvergenceTrace(trace)


def kaczmarz_sparse_step(v: CoefVector, e: SparseEmbedding, target: float) -> None:
    """One projection of v onto {u : <embedding, u> = target}; O(m) work."""
    residual = target - dot(e, v)
    axpy_into(e, residual / (1.0 + 0.5 * e.m), v)


def kaczmarz_run(
    samples: SampleSet,
    m: int,
    cfg: KaczmarzConfig,
    trace_ref: CoefVector | None = None,
) -> tuple[CoefVector, ConvergenceTrace | None]:
    """Run the sparse Kaczmarz sweep over the sample set.

    Returns the final iterate and, when trace_ref is given, the per-step
    squared distance to it (length iterations + 1, starting at step 0).
    """
    if len(samples) == 0:
        raise ValueError("sample set is empty")
    if cfg.with_replacement:
        idx = rngmod.stream_rng(cfg.seed, rngmod.INDICES).integers(
            0, len(samples), size=cfg.iterations
        )
        xs = np.ascontiguousarray(samples.points[idx, 0])
        ys = np.ascontiguousarray(samples.points[idx, 1])
        targets = np.ascontiguousarray(samples.values[idx])
    else:
        if cfg.iterations > len(samples):
            raise ValueError(
                f"use-once mode needs iterations <= sample count "
                f"({cfg.iterations} > {len(samples)})"
            )
        xs = np.ascontiguousarray(samples.points[: cfg.iterations, 0])
        ys = np.ascontiguousarray(samples.points[: cfg.iterations, 1])
        targets = np.ascontiguousarray(samples.values[: cfg.iterations])
    if cfg.initial is not None:
        if cfg.initial.m != m:
            raise ValueError(f"initial vector level {cfg.initial.m} != {m}")
        v = cfg.initial.values.copy()
    else:
        v = CoefVector.zeros(m).values
    ref = None
    if trace_ref is not None:
        if trace_ref.m != m:
            raise ValueError(f"trace reference level {trace_ref.m} != {m}")
        ref = trace_ref.values
    trace = kernels.kaczmarz_sweep(v, xs, ys, targets, m, ref)
    return CoefVector(m, v), (ConvergenceTrace(trace) if trace is not None else None)
