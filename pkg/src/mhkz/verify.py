"""Exact-identity verification checks, runnable from the CLI and from tests.

Each check returns the measured deviation so a report can show how much
headroom a passing build has.  These are algebraic identities of the
construction; they hold to rounding error, not to statistical tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mhkz import dyadic, functions
from mhkz.dyadic import dim
from mhkz.embedding import CoefVector, embed, full_matrix
from mhkz.kaczmarz import kaczmarz_sparse_step
from mhkz.smolyak import CenterSamples, build_weight_vector, smolyak_eval_many
from mhkz.approximator import Model, evaluate_many

EXACTNESS_FUNCTIONS = ("paper-example", "bilinear", "separable-x", "holder-half")


@dataclass
class CheckResult:
    name: str
    tolerance: float
    measured: float
    passed: bool
    detail: str = ""


def _result(name, tolerance, measured, detail=""):
    return CheckResult(name, tolerance, float(measured), float(measured) <= tolerance, detail)


def check_rect_counts(max_m: int = 5) -> CheckResult:
    """Number of area-2^-m rectangles equals (m+1)*2^m for each level."""
    worst = 0
    for m in range(1, max_m + 1):
        total = sum(1 for k in range(m + 1) for _ in dyadic.rects_of_shape(k, m - k))
        worst = max(worst, abs(total - (m + 1) * (1 << m)))
    return _result("rect-count", 0, worst, f"m <= {max_m}")


def check_shape_tilings(max_m: int = 5) -> CheckResult:
    """Each width-2^-k area-2^-m family is disjoint and covers the square."""
    worst = 0
    for m in range(1, max_m + 1):
        n = 1 << m
        for k in range(m + 1):
            cover = np.zeros((n, n), dtype=np.int64)
            for rect in dyadic.rects_of_shape(k, m - k):
                x0 = rect.ix << (m - k)
                y0 = rect.iy << k
                cover[x0 : x0 + (1 << (m - k)), y0 : y0 + (1 << k)] += 1
            worst = max(worst, int(abs(cover - 1).max()))
    return _result("shape-tiling", 0, worst, f"cell cover counts, m <= {max_m}")


def check_gram(max_m: int = 5, tol: float = 1e-9) -> CheckResult:
    """A^T A equals 2^m I entrywise for the matrix of all cell embeddings."""
    worst = 0.0
    for m in range(1, max_m + 1):
        a = full_matrix(m)
        gram = a.T @ a
        worst = max(worst, float(np.abs(gram - (1 << m) * np.eye(dim(m))).max()))
    return _result("gram-identity", tol, worst, f"m <= {max_m}")


def check_embedding_norm(m: int = 5, n_points: int = 1000, tol: float = 1e-12) -> CheckResult:
    """Squared norm of every embedding equals 1 + m/2."""
    rng = np.random.default_rng(7)
    pts = rng.random((n_points, 2))
    worst = 0.0
    for x, y in pts:
        e = embed(x, y, m)
        worst = max(worst, abs(float(e.coefs @ e.coefs) - (1.0 + 0.5 * m)))
    return _result("embedding-norm", tol, worst, f"m = {m}, {n_points} points")


def check_projection(m: int = 5, trials: int = 100, tol: float = 1e-12) -> CheckResult:
    """A single sparse step lands the iterate on the sampled hyperplane."""
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(trials):
        v = CoefVector(m, rng.standard_normal(dim(m)))
        x, y = rng.random(2)
        target = float(rng.standard_normal())
        e = embed(x, y, m)
        kaczmarz_sparse_step(v, e, target)
        residual = abs(target - float(e.coefs @ v.values[e.indices]))
        worst = max(worst, residual / (1.0 + abs(target)))
    return _result("single-step-projection", tol, worst, f"m = {m}, {trials} trials")


def exactness_max_error(
    m: int,
    function_name: str,
    *,
    band_scale_offset: int = 1,
    corrupt: tuple[int, float] | None = None,
) -> float:
    """Max deviation of <embed(c), w> from the combination value over all cells.

    corrupt, when given, perturbs one weight entry before the comparison;
    band_scale_offset forwards to build_weight_vector.  Both knobs exist for
    mutation tests of this check.
    """
    fn = functions.get(function_name)
    samples = CenterSamples.from_function(fn.f, m)
    w = build_weight_vector(samples, band_scale_offset=band_scale_offset)
    if corrupt is not None:
        index, delta = corrupt
        w.values[index] += delta
    n = 1 << m
    centers = (np.arange(n) + 0.5) / n
    xx, yy = np.meshgrid(centers, centers)
    xs, ys = xx.ravel(), yy.ravel()
    via_embedding = evaluate_many(Model(m, w), xs, ys)
    direct = smolyak_eval_many(samples, xs, ys)
    return float(np.abs(via_embedding - direct).max())


def check_exactness(
    max_m: int = 5,
    function_names=EXACTNESS_FUNCTIONS,
    tol: float = 1e-10,
    band_scale_offset: int = 1,
) -> CheckResult:
    """Weight vector reproduces the combination formula at every cell center."""
    worst = 0.0
    for m in range(1, max_m + 1):
        for name in function_names:
            worst = max(
                worst,
                exactness_max_error(m, name, band_scale_offset=band_scale_offset),
            )
    return _result(
        "weight-exactness", tol, worst, f"m <= {max_m}, {len(function_names)} functions"
    )


def run_all() -> list[CheckResult]:
    return [
        check_rect_counts(),
        check_shape_tilings(),
        check_gram(),
        check_embedding_norm(),
        check_projection(),
        check_exactness(),
    ]
