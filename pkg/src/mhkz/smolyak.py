"""Center-sample combination approximation and its exact weight vector.

The combination value at a point adds the function values at the centers of
the m+1 containing rectangles of area 2^-m and subtracts the values at the
centers of the m containing rectangles of area 2^(-m+1).  The weight vector
built here reproduces that combination exactly as a linear functional in
embedding coordinates: <embed(x), weights> equals the combination value at
every dyadic cell center.  That identity is an algebraic fact, not an
approximation, and serves as the test oracle for the whole pipeline.

Band-entry scale convention: the scale sum for a band entry starts at the
level of the rectangle's halves, i.e. band + 1, with leading factor
2^(band+1)/sqrt(2).  Starting the sum at the band's own level instead
breaks the reproduction identity already at m = 1; the tests exercise both
choices and band + 1 is the unique one under which the identity holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mhkz.dyadic import (
    DyadicRect,
    band_rect_index,
    check_level,
    check_point,
    dim,
    halves,
)
from mhkz.embedding import INV_SQRT2, CoefVector


def fine_shapes(m: int) -> list[tuple[int, int]]:
    """Side levels (kx, ky) of the area-2^-m rectangle families."""
    return [(k, m - k) for k in range(m + 1)]


def coarse_shapes(m: int) -> list[tuple[int, int]]:
    """Side levels of the area-2^(-m+1) families (empty x-level m)."""
    return [(k, m - 1 - k) for k in range(m)]


@dataclass
class CenterSamples:
    """Function values at the centers of all combination rectangles.

    fine maps every rectangle of area 2^-m to f at its center ((m+1)*2^m
    entries); coarse does the same for area 2^(-m+1) (m*2^(m-1) entries).
    """

    m: int
    fine: dict[DyadicRect, float]
    coarse: dict[DyadicRect, float]
    _grids: dict[tuple[str, int], np.ndarray] = field(
        default_factory=dict, repr=False, compare=False
    )

    @classmethod
    def from_function(cls, f, m: int) -> "CenterSamples":
        """Evaluate f (vectorized, two array arguments) at all centers."""
        check_level(m)
        fine: dict[DyadicRect, float] = {}
        coarse: dict[DyadicRect, float] = {}
        grids: dict[tuple[str, int], np.ndarray] = {}
        for kind, shapes, target in (
            ("fine", fine_shapes(m), fine),
            ("coarse", coarse_shapes(m), coarse),
        ):
            for kx, ky in shapes:
                nx, ny = 1 << kx, 1 << ky
                cx = (np.arange(nx) + 0.5) / nx
                cy = (np.arange(ny) + 0.5) / ny
                grid = np.asarray(
                    f(cx[:, None], cy[None, :]), dtype=np.float64
                )
                grid = np.broadcast_to(grid, (nx, ny)).copy()
                grids[(kind, kx)] = grid
                for ix in range(nx):
                    for iy in range(ny):
                        target[DyadicRect(kx, ky, ix, iy)] = float(grid[ix, iy])
        out = cls(m, fine, coarse)
        out._grids = grids
        return out

    def _grid(self, kind: str, kx: int) -> np.ndarray:
        """Per-shape value array [ix, iy], built lazily from the maps."""
        key = (kind, kx)
        cached = self._grids.get(key)
        if cached is not None:
            return cached
        ky = (self.m if kind == "fine" else self.m - 1) - kx
        source = self.fine if kind == "fine" else self.coarse
        nx, ny = 1 << kx, 1 << ky
        grid = np.empty((nx, ny))
        for ix in range(nx):
            for iy in range(ny):
                rect = DyadicRect(kx, ky, ix, iy)
                try:
                    grid[ix, iy] = source[rect]
                except KeyError:
                    raise ValueError(f"missing center sample for {rect}") from None
        self._grids[key] = grid
        return grid


def smolyak_eval(samples: CenterSamples, x: float, y: float) -> float:
    """Combination-formula value at (x, y) from stored center samples."""
    m = samples.m
    check_point(x, y)
    total = 0.0
    try:
        for k in range(m + 1):
            rect = DyadicRect(k, m - k, int(x * (1 << k)), int(y * (1 << (m - k))))
            total += samples.fine[rect]
        for k in range(1, m + 1):
            rect = DyadicRect(
                k - 1, m - k, int(x * (1 << (k - 1))), int(y * (1 << (m - k)))
            )
            total -= samples.coarse[rect]
    except KeyError as missing:
        raise ValueError(f"missing center sample for {missing.args[0]}") from None
    return total


def smolyak_eval_many(samples: CenterSamples, xs, ys) -> np.ndarray:
    """Vectorized smolyak_eval over arrays of points."""
    m = samples.m
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    out = np.zeros(xs.shape)
    for k in range(m + 1):
        grid = samples._grid("fine", k)
        out += grid[(xs * (1 << k)).astype(np.int64), (ys * (1 << (m - k))).astype(np.int64)]
    for k in range(1, m + 1):
        grid = samples._grid("coarse", k - 1)
        out -= grid[
            (xs * (1 << (k - 1))).astype(np.int64), (ys * (1 << (m - k))).astype(np.int64)
        ]
    return out


def _axis_slice(level_rect: int, pos: int, level_family: int) -> slice:
    # Indices of the family intervals meeting the rectangle's interval.
    if level_family >= level_rect:
        shift = level_family - level_rect
        return slice(pos << shift, (pos + 1) << shift)
    return slice(pos >> (level_rect - level_family), (pos >> (level_rect - level_family)) + 1)


def s_r(samples: CenterSamples, rect: DyadicRect, r: int) -> float:
    """Signed sum of center values over the width-2^-r rectangles meeting rect.

    Adds the values on area-2^-m rectangles of width 2^-r that intersect rect
    with positive area and subtracts those on area-2^(-m+1) ones.  At r = m
    the subtracted family is empty (its members would need height 2).
    """
    m = samples.m
    if not 0 <= r <= m:
        raise ValueError(f"width level r must be in 0..{m}, got {r}")
    fine = samples._grid("fine", r)
    value = float(
        fine[_axis_slice(rect.kx, rect.ix, r), _axis_slice(rect.ky, rect.iy, m - r)].sum()
    )
    if r < m:
        coarse = samples._grid("coarse", r)
        value -= float(
            coarse[
                _axis_slice(rect.kx, rect.ix, r), _axis_slice(rect.ky, rect.iy, m - 1 - r)
            ].sum()
        )
    return value


def build_weight_vector(samples: CenterSamples, *, band_scale_offset: int = 1) -> CoefVector:
    """Weight vector reproducing the combination formula in embedding coordinates.

    band_scale_offset selects the level, relative to the band, at which each
    band entry's geometric scale sum starts (the rectangle halves live at
    band + 1).  It exists only so tests can demonstrate that the default is
    the unique convention under which the reproduction identity holds.
    """
    m = samples.m
    w = np.zeros(dim(m))
    scales = 2.0 ** -np.arange(m + 1)
    for iy in range(1 << m):
        slab = DyadicRect(0, m, 0, iy)
        w[iy] = sum(scales[r] * s_r(samples, slab, r) for r in range(m + 1))
    for band in range(m):
        for row in range(1 << (m - 1 - band)):
            for col in range(1 << band):
                rect = DyadicRect(band, m - 1 - band, col, row)
                left, right = halves(rect)
                start = band + band_scale_offset
                acc = sum(
                    scales[r] * (s_r(samples, left, r) - s_r(samples, right, r))
                    for r in range(start, m + 1)
                )
                w[band_rect_index(m, band, row, col)] = (1 << start) * INV_SQRT2 * acc
    return CoefVector(m, w)
