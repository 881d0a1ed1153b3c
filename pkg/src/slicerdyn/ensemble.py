"""Finite-ensemble Monte Carlo of the slicer map.

``N`` points are placed uniformly in cell 0 and iterated. The internal
coordinate never changes, so each point is a deterministic walk on the
integers driven by its own ``x``. Initial points come from a counter-based
stream keyed by ``(seed, particle index)``, and each particle writes only its
own column of the output, so results do not depend on the thread count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from . import rng
from .grids import geometric_integers

__all__ = ["EnsembleConfig", "EmpiricalHistogram", "initial_points", "run_ensemble",
           "cell_paths", "msd_series", "empirical_moment", "moment_stderr"]


@dataclass(frozen=True)
class EnsembleConfig:
    alpha: float
    particles: int
    steps: int
    seed: int = 0
    sample_times: tuple | None = None
    mirror: bool = False

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if self.particles < 1:
            raise ValueError("need at least one particle")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        times = self.sample_times
        times = (self.steps,) if times is None else tuple(int(t) for t in times)
        if not times or any(b < a for a, b in zip(times, times[1:])):
            raise ValueError("sample_times must be a non-empty sorted sequence")
        if times[0] < 0 or times[-1] > self.steps:
            raise ValueError("sample_times must lie in [0, steps]")
        object.__setattr__(self, "sample_times", times)

    @classmethod
    def geometric(cls, alpha, particles, steps, points=None, seed=0, **kw) -> "EnsembleConfig":
        times = geometric_integers(max(steps, 1), points)
        return cls(alpha, particles, steps, seed, tuple(int(t) for t in times), **kw)


@dataclass(frozen=True)
class EmpiricalHistogram:
    time: int
    cells: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[int, int]:
        return {int(j): int(c) for j, c in zip(self.cells, self.counts)}

    def frequencies(self) -> np.ndarray:
        return self.counts / self.total

    def raw_moment(self, p: int) -> int:
        """``sum_j counts_j * j**p`` in exact integer arithmetic."""
        return sum(int(c) * int(j) ** p for j, c in zip(self.cells, self.counts))

    def moment(self, p: int) -> float:
        return self.raw_moment(p) / self.total


def initial_points(seed: int, count: int, mirror: bool = False) -> np.ndarray:
    x = rng.uniform_array(seed, (rng.STREAM_PARTICLE,), 0, count)
    return 1.0 - x if mirror else x


@nb.njit(cache=True)
def _ell(m, alpha, offset):
    if m == 0:
        return 0.5
    return (abs(m) + offset) ** (-alpha)


@nb.njit(cache=True, parallel=True)
def _paths(xs, alpha, offset, times, out):
    """Cell of every particle at every sample time.

    A particle whose cell repeats after two steps has entered a 2-cycle
    (the state ``(x, m)`` recurs), so the rest of its path is filled by
    parity instead of being stepped.
    """
    n_times = times.shape[0]
    horizon = times[n_times - 1]
    for i in nb.prange(xs.shape[0]):
        x = xs[i]
        m = 0
        prev = 0
        prev2 = 0
        k = 0
        si = 0
        while si < n_times and times[si] == 0:
            out[si, i] = 0
            si += 1
        while k < horizon:
            ell = _ell(m, alpha, offset)
            if x < ell or (0.5 < x and x < 1.0 - ell):
                nxt = m - 1
            else:
                nxt = m + 1
            prev2 = prev
            prev = m
            m = nxt
            k += 1
            while si < n_times and times[si] == k:
                out[si, i] = m
                si += 1
            if k >= 2 and m == prev2:
                # cycle m, prev, m, prev, ...
                while si < n_times:
                    out[si, i] = m if (times[si] - k) % 2 == 0 else prev
                    si += 1
                break


def cell_paths(config: EnsembleConfig, threads: int | None = None) -> np.ndarray:
    """``(len(sample_times), N)`` array of cell indices."""
    xs = initial_points(config.seed, config.particles, config.mirror)
    times = np.asarray(config.sample_times, dtype=np.int64)
    out = np.empty((times.size, config.particles), dtype=np.int64)
    previous = nb.get_num_threads()
    if threads is not None:
        nb.set_num_threads(max(1, min(int(threads), nb.config.NUMBA_NUM_THREADS)))
    try:
        _paths(xs, float(config.alpha), 2.0 ** (1.0 / config.alpha), times, out)
    finally:
        nb.set_num_threads(previous)
    return out


def run_ensemble(config: EnsembleConfig, threads: int | None = None) -> list[EmpiricalHistogram]:
    paths = cell_paths(config, threads)
    hists = []
    for t, row in zip(config.sample_times, paths):
        cells, counts = np.unique(row, return_counts=True)
        hists.append(EmpiricalHistogram(int(t), cells, counts.astype(np.int64)))
    return hists


def empirical_moment(config: EnsembleConfig, p: int,
                     hists: list[EmpiricalHistogram] | None = None) -> list[tuple[int, float]]:
    """``[(n, mean of displacement**p)]`` at the sample times."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    hists = hists if hists is not None else run_ensemble(config)
    return [(h.time, h.moment(p)) for h in hists]


def msd_series(config: EnsembleConfig, hists: list[EmpiricalHistogram] | None = None):
    return empirical_moment(config, 2, hists)


def moment_stderr(hist: EmpiricalHistogram, p: int) -> float:
    """Standard error of the sample mean of ``displacement**p``."""
    n = hist.total
    mean = hist.raw_moment(p) / n
    second = hist.raw_moment(2 * p) / n
    var = max(second - mean * mean, 0.0) * n / max(n - 1, 1)
    return float(np.sqrt(var / n))
