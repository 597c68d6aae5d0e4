"""Point-sample containers, generation, and CSV ingestion."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from mhkz import rng as rngmod


@dataclass
class SampleSet:
    """Sampled points of [0,1)^2 with their function values.

    seed records provenance when the set was drawn by draw_samples; it is
    None for externally supplied data.
    """

    points: np.ndarray  # (l, 2) float64
    values: np.ndarray  # (l,)
    seed: object = None

    def __post_init__(self):
        self.points = np.ascontiguousarray(self.points, dtype=np.float64)
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.points.ndim != 2 or self.points.shape[1] != 2:
            raise ValueError("points must have shape (l, 2)")
        if self.values.shape != (len(self.points),):
            raise ValueError("values must match points in length")
        if len(self.points) and (self.points.min() < 0.0 or self.points.max() >= 1.0):
            raise ValueError("sample coordinates must lie in [0,1)")

    def __len__(self) -> int:
        return len(self.points)


def draw_samples(f, l: int, seed=None) -> SampleSet:
    """l i.i.d. uniform points of [0,1)^2 with their f values.

    Deterministic for a given seed; the points come from the dedicated
    point substream so other consumers of the same seed stay independent.
    """
    if l < 1:
        raise ValueError("sample count must be at least 1")
    points = rngmod.stream_rng(seed, rngmod.POINTS).random((l, 2))
    values = np.asarray(f(points[:, 0], points[:, 1]), dtype=np.float64)
    if values.ndim == 0:
        values = np.full(l, float(values))
    return SampleSet(points, values, seed)


def read_samples_csv(path) -> SampleSet:
    """Read a bring-your-own-data CSV with header columns x, y, value."""
    xs, ys, vals = [], [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"x", "y", "value"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: expected CSV header with columns x, y, value")
        for row in reader:
            xs.append(float(row["x"]))
            ys.append(float(row["y"]))
            vals.append(float(row["value"]))
    if not xs:
        raise ValueError(f"{path}: no sample rows")
    return SampleSet(np.column_stack([xs, ys]), np.asarray(vals), None)
