"""Sparse point embeddings over the dyadic index layout.

The embedding of a point has m+1 nonzero coordinates: a unit coefficient on
the containing width-1 slab rectangle, and +-1/sqrt(2) on the containing
rectangle of each band, positive for the left half and negative for the
right.  Every embedding therefore has squared Euclidean norm exactly
1 + m/2, which is what lets the Kaczmarz solver treat uniform point samples
as uniform row samples of an equal-norm system.  The embedding is constant
on the 2^-m by 2^-m dyadic cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mhkz import dyadic, instrument
from mhkz.dyadic import check_level, dim

INV_SQRT2 = math.sqrt(0.5)


@dataclass
class CoefVector:
    """Dense coefficient vector of length dim(m) over the dyadic index layout."""

    m: int
    values: np.ndarray

    def __post_init__(self):
        check_level(self.m)
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != (dim(self.m),):
            raise ValueError(
                f"coefficient vector at level {self.m} must have length {dim(self.m)}, "
                f"got shape {self.values.shape}"
            )

    @classmethod
    def zeros(cls, m: int) -> "CoefVector":
        check_level(m)
        return cls(m, np.zeros(dim(m)))

    def copy(self) -> "CoefVector":
        return CoefVector(self.m, self.values.copy())


@dataclass
class SparseEmbedding:
    """Nonzero coordinates of one embedded point.

    indices[0] is the slab index carrying coefficient 1.0; indices[k] for
    k >= 1 is the band-(k-1) rectangle index carrying +-1/sqrt(2), stored in
    band order.
    """

    m: int
    indices: np.ndarray  # int64, length m+1
    coefs: np.ndarray  # float64, length m+1, coefs[0] == 1.0

    @property
    def nnz(self) -> int:
        return self.m + 1

    def norm_sq(self) -> float:
        """Squared Euclidean norm, identically 1 + m/2."""
        return 1.0 + 0.5 * self.m


def embed(x: float, y: float, m: int) -> SparseEmbedding:
    """Sparse embedding of a point of [0,1)^2 at level m."""
    indices, signs = dyadic.locate(x, y, m)
    coefs = np.empty(m + 1, dtype=np.float64)
    coefs[0] = 1.0
    coefs[1:] = signs * INV_SQRT2
    return SparseEmbedding(m, indices, coefs)


def embed_block(xs, ys, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized embedding: index and coefficient matrices of shape (N, m+1)."""
    indices, signs = dyadic.locate_block(xs, ys, m)
    coefs = np.empty(indices.shape, dtype=np.float64)
    coefs[:, 0] = 1.0
    coefs[:, 1:] = signs * INV_SQRT2
    return indices, coefs


def _check_same_level(e: SparseEmbedding, v: CoefVector) -> None:
    if e.m != v.m:
        raise ValueError(f"level mismatch: embedding at m={e.m}, vector at m={v.m}")


def dot(e: SparseEmbedding, v: CoefVector) -> float:
    """Inner product <embedding, v>; exactly m+1 multiply-adds."""
    _check_same_level(e, v)
    instrument.record(e.m + 1)
    values = v.values
    acc = values[e.indices[0]]
    for k in range(1, e.m + 1):
        acc += e.coefs[k] * values[e.indices[k]]
    return float(acc)


def axpy_into(e: SparseEmbedding, scale: float, v: CoefVector) -> None:
    """In-place update v += scale * embedding; touches only the m+1 nonzeros."""
    _check_same_level(e, v)
    instrument.record(e.m + 1)
    v.values[e.indices] += scale * e.coefs


def full_matrix(m: int) -> np.ndarray:
    """Dense matrix of all 2^(2m) cell-center embeddings (test scale only).

    Row j is the embedding of the center of cell j, cells enumerated y-major
    (j = iy*2^m + ix).  Rejects m > 7 to keep memory bounded.
    """
    check_level(m)
    if m > 7:
        raise ValueError("full_matrix is limited to m <= 7 (memory guard)")
    n = 1 << m
    centers = (np.arange(n) + 0.5) / n
    xx, yy = np.meshgrid(centers, centers)  # row index is iy, column is ix
    indices, coefs = embed_block(xx.ravel(), yy.ravel(), m)
    a = np.zeros((n * n, dim(m)))
    a[np.arange(n * n)[:, None], indices] = coefs
    return a
