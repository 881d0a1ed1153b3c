"""Geometric sampling grids."""

from __future__ import annotations

import math

import numpy as np

# last-decade fits want at least 20 samples per decade
POINTS_PER_DECADE = 24


def default_points(lo: float, hi: float) -> int:
    decades = math.log10(hi / lo) if hi > lo else 0.0
    return max(3, int(math.ceil(POINTS_PER_DECADE * decades)) + 1)


def geometric_grid(lo: float, hi: float, points: int | None = None) -> np.ndarray:
    """Float grid from ``lo`` to ``hi`` inclusive."""
    if points is None:
        points = default_points(lo, hi)
    return np.unique(np.geomspace(lo, hi, points))


def geometric_integers(hi: int, points: int | None = None, lo: int = 1) -> np.ndarray:
    """Distinct integers near a geometric grid; rounding merges the early points."""
    if points is None:
        points = default_points(lo, hi)
    return np.unique(np.round(np.geomspace(lo, hi, points)).astype(np.int64))
