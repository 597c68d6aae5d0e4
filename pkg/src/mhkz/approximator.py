"""End-to-end pipeline: sample, fit, evaluate, integrate, spin-cycle, measure.

A fitted model is the final Kaczmarz iterate over the drawn samples; its
evaluation <embed(x), coef> is piecewise constant on 2^-m by 2^-m dyadic
cells and costs O(m) per point.  The integral over the square is the mean
of the first 2^m coefficients (the band coordinates integrate to zero),
plus the recentering offset when one was applied.

Spin cycling refits the same samples under random torus shifts and averages
the shifted evaluations, which suppresses the grid-alignment artifacts of a
single fit.  Shift arithmetic is the per-coordinate fractional part with
frac(1.0) = 0.0, so points stay in [0,1); functions that are not periodic
keep a boundary artifact, which is documented rather than corrected.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mhkz import instrument, kernels
from mhkz import rng as rngmod
from mhkz.dyadic import check_point, dim
from mhkz.embedding import CoefVector, dot, embed
from mhkz.kaczmarz import KaczmarzConfig, kaczmarz_run
from mhkz.samples import SampleSet, draw_samples  # re-exported pipeline surface

__all__ = [
    "Model",
    "ModelMeta",
    "SpinEnsemble",
    "SampleSet",
    "draw_samples",
    "default_iterations",
    "fit",
    "fit_spin",
    "evaluate",
    "evaluate_many",
    "ensemble_evaluate",
    "ensemble_evaluate_many",
    "integrate",
    "l2_error",
    "torus_shift",
    "save_model",
    "load_model",
    "save_ensemble",
    "load_ensemble",
    "ModelFormatError",
]

MAGIC = b"MHKZ"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<HHdddQ")  # version, m, offset, shift_x, shift_y, count


class ModelFormatError(ValueError):
    """Raised when a model file is malformed."""


@dataclass
class ModelMeta:
    """Provenance of a fit; only offset and shift survive serialization."""

    iterations: int | None = None
    c1: float | None = None
    seed: object = None
    recenter_offset: float = 0.0
    shift: tuple[float, float] | None = None


@dataclass
class Model:
    """Piecewise-constant approximation: level, coefficients, provenance."""

    m: int
    coef: CoefVector
    meta: ModelMeta = field(default_factory=ModelMeta)

    def __post_init__(self):
        if self.coef.m != self.m:
            raise ValueError("coefficient vector level does not match model level")


@dataclass
class SpinEnsemble:
    """Shift-averaged family of models fitted from one sample set."""

    shifts: list[tuple[float, float]]
    models: list[Model]

    def __post_init__(self):
        if len(self.shifts) != len(self.models):
            raise ValueError("one shift per model required")


def default_iterations(m: int, c1: float = 8.0) -> int:
    """Default sample budget ceil(c1 * n * ln(n)^2) with n = 2^m."""
    n = 1 << m
    return math.ceil(c1 * n * math.log(n) ** 2)


def fit(
    samples: SampleSet,
    m: int,
    cfg: KaczmarzConfig,
    *,
    recenter: bool = False,
    c1: float | None = None,
) -> Model:
    """Fit a model by running the sparse Kaczmarz sweep over the samples.

    With recenter=True the first sample value is subtracted from every
    target and stored in the model meta; evaluate and integrate add it back.
    """
    offset = float(samples.values[0]) if recenter else 0.0
    if recenter:
        samples = SampleSet(samples.points, samples.values - offset, samples.seed)
    coef, _ = kaczmarz_run(samples, m, cfg)
    meta = ModelMeta(
        iterations=cfg.iterations, c1=c1, seed=samples.seed, recenter_offset=offset
    )
    return Model(m, coef, meta)


def evaluate(model: Model, x: float, y: float) -> float:
    """Model value at one point; exactly m+1 coefficient touches."""
    return dot(embed(x, y, model.m), model.coef) + model.meta.recenter_offset


def evaluate_many(model: Model, xs, ys) -> np.ndarray:
    """Batch evaluation through the active kernel backend."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    return kernels.evaluate_many(
        model.coef.values, xs, ys, model.m, model.meta.recenter_offset
    )


def integrate(model: Model) -> float:
    """Exact integral of the piecewise-constant model over [0,1)^2.

    Reads exactly n = 2^m coefficients: the band coordinates contribute
    +1/sqrt(2) and -1/sqrt(2) on equal areas and integrate to zero.
    """
    n = 1 << model.m
    instrument.record(n)
    return float(model.coef.values[:n].mean()) + model.meta.recenter_offset


def torus_shift(points: np.ndarray, shift) -> np.ndarray:
    """Per-coordinate fractional part of points + shift, with frac(1.0) = 0.0."""
    shifted = points + np.asarray(shift, dtype=np.float64)
    return np.where(shifted >= 1.0, shifted - 1.0, shifted)


def fit_spin(
    samples: SampleSet,
    m: int,
    cfg: KaczmarzConfig,
    q: int,
    shift_seed=None,
    *,
    recenter: bool = False,
    shifts=None,
    max_workers: int | None = None,
) -> SpinEnsemble:
    """Fit q models of the same samples under random torus shifts.

    Shifts are drawn from the dedicated shift substream of shift_seed
    (cfg.seed when omitted) unless given explicitly.  The fits share the
    read-only sample set and run concurrently.
    """
    if q < 1:
        raise ValueError("spin count must be at least 1")
    if shifts is None:
        seed = cfg.seed if shift_seed is None else shift_seed
        shifts = rngmod.stream_rng(seed, rngmod.SHIFTS).random((q, 2))
    shifts = np.asarray(shifts, dtype=np.float64)
    if shifts.shape != (q, 2):
        raise ValueError("shifts must have shape (q, 2)")

    def fit_one(shift):
        moved = SampleSet(torus_shift(samples.points, shift), samples.values, samples.seed)
        model = fit(moved, m, cfg, recenter=recenter)
        model.meta.shift = (float(shift[0]), float(shift[1]))
        return model

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        models = list(pool.map(fit_one, shifts))
    return SpinEnsemble([m.meta.shift for m in models], models)


def ensemble_evaluate_many(ensemble: SpinEnsemble, xs, ys) -> np.ndarray:
    """Average of the member models evaluated at their shifted arguments."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    total = np.zeros(xs.shape)
    for shift, model in zip(ensemble.shifts, ensemble.models):
        sx = torus_shift(xs, shift[0])
        sy = torus_shift(ys, shift[1])
        total += evaluate_many(model, sx, sy)
    return total / len(ensemble.models)


def ensemble_evaluate(ensemble: SpinEnsemble, x: float, y: float) -> float:
    check_point(x, y)
    return float(ensemble_evaluate_many(ensemble, np.array([x]), np.array([y]))[0])


def l2_error(target, f, mc_points: int = 200_000, seed=0) -> tuple[float, float]:
    """Monte Carlo estimate of the L2 distance between f and a model/ensemble.

    Returns (estimate, standard error of the estimate); the standard error
    is the delta-method propagation of the mean-square's standard error, so
    acceptance tolerances can be judged statistically.
    """
    if mc_points < 100:
        raise ValueError("mc_points must be at least 100")
    pts = rngmod.stream_rng(seed, rngmod.MC).random((mc_points, 2))
    xs, ys = pts[:, 0], pts[:, 1]
    if isinstance(target, SpinEnsemble):
        approx = ensemble_evaluate_many(target, xs, ys)
    else:
        approx = evaluate_many(target, xs, ys)
    sq_dev = (np.asarray(f(xs, ys), dtype=np.float64) - approx) ** 2
    mean_sq = float(sq_dev.mean())
    se_mean_sq = float(sq_dev.std(ddof=1)) / math.sqrt(mc_points)
    estimate = math.sqrt(mean_sq)
    std_error = se_mean_sq / (2.0 * estimate) if estimate > 0.0 else 0.0
    return estimate, std_error


def save_model(model: Model, path) -> None:
    """Write the binary model format (little endian, 40-byte header)."""
    shift = model.meta.shift or (0.0, 0.0)
    values = model.coef.values
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(
            _HEADER.pack(
                FORMAT_VERSION,
                model.m,
                model.meta.recenter_offset,
                shift[0],
                shift[1],
                len(values),
            )
        )
        fh.write(values.astype("<f8").tobytes())


def load_model(path) -> Model:
    """Read a model file; raises ModelFormatError on any malformation."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ModelFormatError(f"{path}: bad magic bytes")
    if len(blob) < 4 + _HEADER.size:
        raise ModelFormatError(f"{path}: truncated header")
    version, m, offset, sx, sy, count = _HEADER.unpack_from(blob, 4)
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"{path}: unsupported version {version}")
    if not 1 <= m <= 26 or count != dim(m):
        raise ModelFormatError(f"{path}: inconsistent level/count ({m}, {count})")
    payload = blob[4 + _HEADER.size :]
    if len(payload) != 8 * count:
        raise ModelFormatError(f"{path}: expected {8 * count} coefficient bytes")
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    shift = (sx, sy) if (sx, sy) != (0.0, 0.0) else None
    meta = ModelMeta(recenter_offset=offset, shift=shift)
    return Model(m, CoefVector(m, values), meta)


def save_ensemble(ensemble: SpinEnsemble, directory) -> None:
    """Persist an ensemble as model files plus a key-value manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = [f"count={len(ensemble.models)}"]
    for i, (shift, model) in enumerate(zip(ensemble.shifts, ensemble.models)):
        name = f"model_{i}.mhkz"
        save_model(model, directory / name)
        lines.append(f"shift_{i}={float(shift[0])!r},{float(shift[1])!r}")
        lines.append(f"model_{i}={name}")
    (directory / "manifest.txt").write_text("\n".join(lines) + "\n")


def load_ensemble(directory) -> SpinEnsemble:
    directory = Path(directory)
    manifest = directory / "manifest.txt"
    entries: dict[str, str] = {}
    for line in manifest.read_text().splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            entries[key] = value
    try:
        count = int(entries["count"])
        shifts, models = [], []
        for i in range(count):
            sx, sy = entries[f"shift_{i}"].split(",")
            shifts.append((float(sx), float(sy)))
            models.append(load_model(directory / entries[f"model_{i}"]))
    except (KeyError, ValueError) as exc:
        raise ModelFormatError(f"{manifest}: malformed manifest ({exc})") from None
    return SpinEnsemble(shifts, models)
