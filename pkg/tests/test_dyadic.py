"""Geometry and index-layout tests for the dyadic module."""

import numpy as np
import pytest

from mhkz import dyadic
from mhkz.dyadic import (
    DyadicRect,
    band_rect_index,
    contains_rect,
    dim,
    halves,
    intersects_positively,
    locate,
    locate_block,
    rect_of_index,
    rects_of_shape,
)


def brute_force_locate(x, y, m):
    """Independent oracle: geometric scan of every candidate rectangle."""
    slab = None
    for iy in range(1 << m):
        if DyadicRect(0, m, 0, iy).contains(x, y):
            slab = iy
    indices = [slab]
    signs = []
    for band in range(m):
        hit = None
        for rect in rects_of_shape(band, m - 1 - band):
            if rect.contains(x, y):
                hit = rect
        indices.append(band_rect_index(m, band, hit.iy, hit.ix))
        left, _ = halves(hit)
        signs.append(1 if left.contains(x, y) else -1)
    return np.array(indices), np.array(signs)


def test_locate_origin_smallest_level():
    indices, signs = locate(0.0, 0.0, 1)
    assert indices.tolist() == [0, 2]
    assert signs.tolist() == [1]


def test_locate_top_right_quadrant():
    indices, signs = locate(0.75, 0.75, 1)
    assert indices.tolist() == [1, 2]
    assert signs.tolist() == [-1]


def test_locate_matches_geometric_scan():
    # Frozen values for the reference point, then the scan oracle at random
    # points.  Derivation: slab floor(0.6*8)=4; bands (col,row) per level.
    indices, signs = locate(0.3, 0.6, 3)
    assert indices.tolist() == [4, 10, 14, 17]
    assert signs.tolist() == [1, -1, 1]
    rng = np.random.default_rng(201)
    for m in (1, 2, 3, 4):
        for x, y in rng.random((20, 2)):
            got_i, got_s = locate(x, y, m)
            exp_i, exp_s = brute_force_locate(x, y, m)
            assert np.array_equal(got_i, exp_i)
            assert np.array_equal(got_s, exp_s)


def test_locate_at_max_level():
    # Index arithmetic stays in 64-bit range at the documented ceiling.
    indices, signs = locate(0.3, 0.6, 26)
    assert len(indices) == 27
    assert indices[0] == int(0.6 * 2**26)
    assert (indices < dim(26)).all()
    assert set(signs.tolist()) <= {1, -1}
    rect = rect_of_index(int(indices[26]), 26)
    assert rect.contains(0.3, 0.6)


def test_locate_rejects_bad_inputs():
    with pytest.raises(ValueError):
        locate(0.5, 0.5, 0)
    with pytest.raises(ValueError):
        locate(0.5, 0.5, 27)
    for x, y in ((1.0, 0.5), (0.5, 1.0), (-0.1, 0.5), (0.5, 2.0)):
        with pytest.raises(ValueError):
            locate(x, y, 3)


def test_locate_block_matches_scalar():
    rng = np.random.default_rng(202)
    pts = rng.random((500, 2))
    for m in (1, 4, 7):
        indices, signs = locate_block(pts[:, 0], pts[:, 1], m)
        for i in (0, 123, 499):
            expect_i, expect_s = locate(pts[i, 0], pts[i, 1], m)
            assert np.array_equal(indices[i], expect_i)
            assert np.array_equal(signs[i], expect_s)


def test_rect_of_index_slab_and_band_starts():
    assert rect_of_index(0, 2) == DyadicRect(0, 2, 0, 0)
    # First band rectangle: width 1, height 2^-(m-1).
    assert rect_of_index(1 << 3, 3) == DyadicRect(0, 2, 0, 0)
    assert rect_of_index(dim(3) - 1, 3) == DyadicRect(2, 0, 3, 0)


def test_rect_of_index_out_of_range():
    with pytest.raises(ValueError):
        rect_of_index(-1, 3)
    with pytest.raises(ValueError):
        rect_of_index(dim(3), 3)


def test_locate_roundtrip_every_index():
    # Exhaustive: each rectangle's center locates back to its own index.
    m = 4
    for j in range(dim(m)):
        rect = rect_of_index(j, m)
        cx, cy = rect.center
        indices, _ = locate(cx, cy, m)
        if j < (1 << m):
            assert indices[0] == j
        else:
            assert indices[rect.kx + 1] == j


def test_halves_unit_level_and_areas():
    left, right = halves(DyadicRect(0, 0, 0, 0))
    assert left == DyadicRect(1, 0, 0, 0)
    assert right == DyadicRect(1, 0, 1, 0)
    rng = np.random.default_rng(203)
    for _ in range(50):
        kx, ky = rng.integers(0, 5, 2)
        rect = DyadicRect(int(kx), int(ky), int(rng.integers(0, 1 << kx)),
                          int(rng.integers(0, 1 << ky)))
        left, right = halves(rect)
        assert left.area == right.area == rect.area / 2
        (lx, ly), (rx, ry) = left.center, right.center
        assert ly == ry == rect.center[1]
        assert rx - lx == rect.width / 2
        assert not intersects_positively(left, right)
        assert contains_rect(rect, left) and contains_rect(rect, right)


def interval_overlap(k1, i1, k2, i2):
    # Oracle on explicit float endpoints (exact dyadic rationals).
    lo = max(i1 * 2.0**-k1, i2 * 2.0**-k2)
    hi = min((i1 + 1) * 2.0**-k1, (i2 + 1) * 2.0**-k2)
    return hi > lo


def test_intersects_positively():
    a = DyadicRect(2, 1, 1, 0)
    assert intersects_positively(a, a)
    # Edge-adjacent rectangles share a boundary segment only.
    assert not intersects_positively(DyadicRect(1, 0, 0, 0), DyadicRect(1, 0, 1, 0))
    rng = np.random.default_rng(204)
    m = 4
    for _ in range(300):
        ka, kb = rng.integers(0, m + 1, 2)
        la, lb = rng.integers(0, m + 1, 2)
        ra = DyadicRect(int(ka), int(la), int(rng.integers(0, 1 << ka)),
                        int(rng.integers(0, 1 << la)))
        rb = DyadicRect(int(kb), int(lb), int(rng.integers(0, 1 << kb)),
                        int(rng.integers(0, 1 << lb)))
        expected = interval_overlap(ra.kx, ra.ix, rb.kx, rb.ix) and interval_overlap(
            ra.ky, ra.iy, rb.ky, rb.iy
        )
        assert intersects_positively(ra, rb) == expected


def test_shape_families_tile_the_square():
    # Every width-2^-k area-2^-m family is disjoint and covers [0,1)^2.
    for m in range(1, 9):
        n = 1 << m
        for k in range(m + 1):
            cover = np.zeros((n, n), dtype=np.int64)
            count = 0
            for rect in rects_of_shape(k, m - k):
                x0 = rect.ix << (m - k)
                y0 = rect.iy << k
                cover[x0 : x0 + (1 << (m - k)), y0 : y0 + (1 << k)] += 1
                count += 1
            assert count == n
            assert (cover == 1).all()


def test_area_2m_rect_count():
    for m in range(1, 9):
        total = sum(1 for k in range(m + 1) for _ in rects_of_shape(k, m - k))
        assert total == (m + 1) * (1 << m)


def _decode_indices(indices, m):
    """Vectorized rect_of_index over an index matrix; returns kx, ky, ix, iy."""
    n = 1 << m
    half = n >> 1
    in_band = indices >= n
    t = np.where(in_band, indices - n, 0)
    band = t // half
    offset = t - band * half
    ix = np.where(in_band, offset & ((1 << band) - 1), 0)
    iy = np.where(in_band, offset >> band, indices)
    kx = np.where(in_band, band, 0)
    ky = np.where(in_band, m - 1 - band, m)
    return kx, ky, ix, iy


def test_locate_consistency_random_points():
    # The rectangle addressed by every returned index contains the point.
    rng = np.random.default_rng(205)
    for m in range(1, 9):
        pts = rng.random((10_000, 2))
        indices, _ = locate_block(pts[:, 0], pts[:, 1], m)
        kx, ky, ix, iy = _decode_indices(indices, m)
        got_ix = (pts[:, 0, None] * (1 << kx)).astype(np.int64)
        got_iy = (pts[:, 1, None] * (1 << ky)).astype(np.int64)
        assert (got_ix == ix).all() and (got_iy == iy).all()


def test_band_nesting_chain():
    # The sign-selected half of each band rectangle nests in the next band's.
    rng = np.random.default_rng(206)
    m = 6
    for x, y in rng.random((100, 2)):
        indices, signs = locate(x, y, m)
        for k in range(1, m):
            rect = rect_of_index(int(indices[k]), m)
            left, right = halves(rect)
            chosen = left if signs[k - 1] == 1 else right
            nxt = rect_of_index(int(indices[k + 1]), m)
            assert contains_rect(nxt, chosen)
