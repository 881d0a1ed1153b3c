"""Pointwise slicer dynamics on the chain of unit cells ``[0, 1] x Z``.

Cell ``m`` is cut at ``l_m``, ``1/2`` and ``1 - l_m``. A point moves one cell
left when ``x`` is in ``[0, l_m)`` or ``(1/2, 1 - l_m)`` and one cell right
otherwise. Points exactly on ``l_m`` or ``1 - l_m`` go right; this choice only
touches a null set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = ["SlicerFamily", "LatticePoint", "slicer_position", "step", "step_inverse",
           "involution", "coarse_trajectory", "breakpoints"]


@dataclass(frozen=True)
class SlicerFamily:
    """Slicer positions ``l_j = (|j| + 2**(1/alpha))**(-alpha)``."""

    alpha: float

    def __post_init__(self):
        a = self.alpha
        if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0):
            raise ValueError(f"alpha must be a positive finite number, got {a!r}")
        object.__setattr__(self, "alpha", float(a))

    @property
    def offset(self) -> float:
        """``2**(1/alpha)``, the shift that pins ``l_0`` to one half."""
        return 2.0 ** (1.0 / self.alpha)

    def position(self, j: int) -> float:
        j = abs(int(j))
        if j == 0:
            return 0.5
        return (j + self.offset) ** (-self.alpha)

    def positions(self, j) -> np.ndarray:
        """Vectorised ``position`` over an integer array."""
        j = np.abs(np.asarray(j, dtype=np.int64))
        out = (j + self.offset) ** (-self.alpha)
        return np.where(j == 0, 0.5, out)


def slicer_position(family: SlicerFamily | float, j: int) -> float:
    if not isinstance(family, SlicerFamily):
        family = SlicerFamily(family)
    return family.position(j)


class LatticePoint(NamedTuple):
    x: float
    m: int


def _check(p: LatticePoint) -> LatticePoint:
    x, m = p
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"internal coordinate must lie in [0, 1], got {x!r}")
    return LatticePoint(float(x), int(m))


def _moves_left(x: float, ell: float) -> bool:
    return x < ell or 0.5 < x < 1.0 - ell


def step(family: SlicerFamily, p: LatticePoint) -> LatticePoint:
    x, m = _check(p)
    ell = family.position(m)
    return LatticePoint(x, m - 1 if _moves_left(x, ell) else m + 1)


def step_inverse(family: SlicerFamily, p: LatticePoint) -> LatticePoint:
    """Backward map, read off the slicers of the cell the point is in.

    ``(x, m) -> (x, m + 1)`` when ``x <= l_m`` or ``1/2 <= x <= 1 - l_m``,
    otherwise ``(x, m - 1)``. This is the time reversal of ``step`` through
    ``involution``, boundaries included.

    It undoes ``step`` whenever the origin and destination cells classify
    ``x`` the same way. Because the slicers depend on the cell, ``step`` is
    not injective on the whole lattice: with ``alpha = 1`` both ``(0.3, 0)``
    and ``(0.3, -2)`` land on ``(0.3, -1)``.
    """
    x, m = _check(p)
    ell = family.position(m)
    if x <= ell or 0.5 <= x <= 1.0 - ell:
        return LatticePoint(x, m + 1)
    return LatticePoint(x, m - 1)


def involution(p: LatticePoint) -> LatticePoint:
    x, m = _check(p)
    return LatticePoint(1.0 - x, m)


def breakpoints(family: SlicerFamily, m: int) -> tuple[float, float, float]:
    ell = family.position(m)
    return ell, 0.5, 1.0 - ell


def coarse_trajectory(family: SlicerFamily, p: LatticePoint, n: int) -> list[int]:
    """Cell indices visited in ``n`` steps from ``p``, ``p.m`` included."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    x, m = _check(p)
    path = [m]
    for _ in range(n):
        m = m - 1 if _moves_left(x, family.position(m)) else m + 1
        path.append(m)
    return path
