"""Dyadic rectangles of the unit square: enumeration, indexing, point location.

Geometry conventions
--------------------
A dyadic rectangle is [ix*2^-kx, (ix+1)*2^-kx) x [iy*2^-ky, (iy+1)*2^-ky),
half open on both axes, so the rectangles of one shape tile [0,1)^2 without
overlap.  Points with a coordinate equal to 1.0 have no containing rectangle
and are rejected everywhere.  Coordinate-to-index maps are floors of x*2^k
in double precision; scaling by a power of two is exact, so no epsilon
nudging is applied anywhere.

Index layout
------------
Coefficient vectors have length dim(m) = (m+2)*2^(m-1).  Global indices are
0-based throughout the code and in all persisted output:

* slab block, indices 0 .. 2^m-1: full-width rectangles of height 2^-m,
  index equals the y position.
* band block, indices 2^m .. dim(m)-1: rectangles of area 2^(-m+1), grouped
  into bands b = 0..m-1 of width 2^-b and height 2^(b-m+1).  Band b starts
  at 2^m + b*2^(m-1); within a band the local offset is row*2^b + col with
  the column varying fastest.

locate() returns, for a point, the index of the one slab rectangle and of
the m band rectangles that contain it, plus the left/right-half flags that
drive the signed embedding coordinates.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

MAX_LEVEL = 26  # keeps every index comfortably inside 64-bit integers


class DyadicRect(NamedTuple):
    """Rectangle [ix*2^-kx, (ix+1)*2^-kx) x [iy*2^-ky, (iy+1)*2^-ky)."""

    kx: int
    ky: int
    ix: int
    iy: int

    @property
    def width(self) -> float:
        return 2.0 ** -self.kx

    @property
    def height(self) -> float:
        return 2.0 ** -self.ky

    @property
    def area(self) -> float:
        return 2.0 ** -(self.kx + self.ky)

    @property
    def center(self) -> tuple[float, float]:
        return ((self.ix + 0.5) * 2.0 ** -self.kx, (self.iy + 0.5) * 2.0 ** -self.ky)

    def contains(self, x: float, y: float) -> bool:
        """Membership test via exact floor arithmetic."""
        return (
            int(x * (1 << self.kx)) == self.ix
            and int(y * (1 << self.ky)) == self.iy
            and 0.0 <= x < 1.0
            and 0.0 <= y < 1.0
        )


def check_level(m: int) -> None:
    if not 1 <= m <= MAX_LEVEL:
        raise ValueError(f"level m must be in 1..{MAX_LEVEL}, got {m}")


def check_point(x: float, y: float) -> None:
    if not (0.0 <= x < 1.0 and 0.0 <= y < 1.0):
        raise ValueError(f"point ({x}, {y}) is outside [0,1)^2")


def dim(m: int) -> int:
    """Length of a coefficient vector at level m: (m+2)*2^(m-1)."""
    return (m + 2) << (m - 1)


def slab_count(m: int) -> int:
    return 1 << m


def band_block_count(m: int) -> int:
    return m << (m - 1)


def band_rect_index(m: int, band: int, row: int, col: int) -> int:
    """Global index of the band rectangle at (band, row, col)."""
    return (1 << m) + band * (1 << (m - 1)) + (row << band) + col


def locate(x: float, y: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Containing-rectangle indices and half signs for one point.

    Returns (indices, signs).  indices is an int64 array of length m+1; the
    first entry is the slab index, entry k >= 1 is the global index of the
    containing band-(k-1) rectangle (width 2^(-k+1), height 2^(k-m)).
    signs[k-1] is +1 when x falls in the left half of that rectangle and -1
    otherwise.
    """
    check_level(m)
    check_point(x, y)
    n = 1 << m
    xi = int(x * n)  # exact: power-of-two scaling
    yi = int(y * n)
    half = n >> 1
    indices = np.empty(m + 1, dtype=np.int64)
    signs = np.empty(m, dtype=np.int64)
    indices[0] = yi
    for k in range(1, m + 1):
        col = xi >> (m - k + 1)
        row = yi >> k
        indices[k] = n + (k - 1) * half + (row << (k - 1)) + col
        signs[k - 1] = 1 if ((xi >> (m - k)) & 1) == 0 else -1
    return indices, signs


def locate_block(xs: np.ndarray, ys: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized locate: index matrix (N, m+1) and sign matrix (N, m)."""
    check_level(m)
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.min(initial=0.0) < 0.0 or xs.max(initial=0.0) >= 1.0:
        raise ValueError("x coordinates must lie in [0,1)")
    if ys.min(initial=0.0) < 0.0 or ys.max(initial=0.0) >= 1.0:
        raise ValueError("y coordinates must lie in [0,1)")
    n = 1 << m
    half = n >> 1
    xi = (xs * n).astype(np.int64)
    yi = (ys * n).astype(np.int64)
    indices = np.empty((len(xi), m + 1), dtype=np.int64)
    signs = np.empty((len(xi), m), dtype=np.int64)
    indices[:, 0] = yi
    for k in range(1, m + 1):
        col = xi >> (m - k + 1)
        row = yi >> k
        indices[:, k] = n + (k - 1) * half + (row << (k - 1)) + col
        signs[:, k - 1] = np.where(((xi >> (m - k)) & 1) == 0, 1, -1)
    return indices, signs


def rect_of_index(j: int, m: int) -> DyadicRect:
    """Rectangle addressed by a 0-based global index (slab block, then bands)."""
    check_level(m)
    j = int(j)
    if not 0 <= j < dim(m):
        raise ValueError(f"index {j} out of range 0..{dim(m) - 1} at level {m}")
    n = 1 << m
    if j < n:
        return DyadicRect(0, m, 0, j)
    band, offset = divmod(j - n, n >> 1)
    row, col = divmod(offset, 1 << band)
    return DyadicRect(band, m - 1 - band, col, row)


def halves(t: DyadicRect) -> tuple[DyadicRect, DyadicRect]:
    """Left and right halves of t along the x axis."""
    left = DyadicRect(t.kx + 1, t.ky, 2 * t.ix, t.iy)
    right = DyadicRect(t.kx + 1, t.ky, 2 * t.ix + 1, t.iy)
    return left, right


def _axis_overlaps(ka: int, ia: int, kb: int, ib: int) -> bool:
    # Dyadic intervals overlap positively iff the finer one nests in the coarser.
    if ka <= kb:
        return (ib >> (kb - ka)) == ia
    return (ia >> (ka - kb)) == ib


def intersects_positively(a: DyadicRect, b: DyadicRect) -> bool:
    """True when the open interiors overlap (positive-area intersection)."""
    return _axis_overlaps(a.kx, a.ix, b.kx, b.ix) and _axis_overlaps(a.ky, a.iy, b.ky, b.iy)


def contains_rect(outer: DyadicRect, inner: DyadicRect) -> bool:
    """True when inner nests inside outer on both axes."""
    return (
        inner.kx >= outer.kx
        and (inner.ix >> (inner.kx - outer.kx)) == outer.ix
        and inner.ky >= outer.ky
        and (inner.iy >> (inner.ky - outer.ky)) == outer.iy
    )


def rects_of_shape(kx: int, ky: int):
    """Iterate all 2^(kx+ky) rectangles with the given side levels."""
    for ix in range(1 << kx):
        for iy in range(1 << ky):
            yield DyadicRect(kx, ky, ix, iy)
