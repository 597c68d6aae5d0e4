"""Seed-derived substreams so every random input is independently reproducible.

Each consumer of randomness draws from its own spawn of the master seed:
sample points, with-replacement row indices, spin shifts, and Monte Carlo
error points never share a stream, so traces stay comparable across modes.
"""

import numpy as np

POINTS = 0
INDICES = 1
SHIFTS = 2
MC = 3


def stream_rng(seed, stream: int) -> np.random.Generator:
    """PCG64 generator on an independent substream of the given seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))
