"""Lévy walk in a quenched one-dimensional array of scatterers.

Scatterers sit on the full line with Pareto gaps of density
``beta * r0**beta / r**(beta + 1)`` on ``[r0, inf)``. A walker starts at the
origin, between the innermost scatterer on each side, flies at speed ``v``,
and at each scatterer is transmitted or reflected with probability 1/2.

Randomness is split the way the model needs it: gap ``k`` on side ``s`` of
environment ``e`` is a function of ``(seed, e, s, k)`` only, and coin ``k``
of walker ``w`` in environment ``e`` is a function of ``(seed, e, w, k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba as nb
import numpy as np

from . import rng
from .grids import geometric_grid
from .summation import compensated_sum

__all__ = [
    "RIGHT",
    "LEFT",
    "QuenchedEnvironment",
    "WalkConfig",
    "WalkRun",
    "MarginalCase",
    "sample_gap",
    "simulate_walk",
    "run_walks",
    "ensemble_moments",
    "visited_sites",
    "alpha_from_beta",
    "predicted_moment_exponent",
    "predicted_msd_exponent",
    "predicted_visited_exponent",
]

RIGHT = 0
LEFT = 1


def sample_gap(beta: float, r0: float, u: float) -> float:
    """Inverse-CDF draw from the Pareto gap law: ``r0 * u**(-1/beta)``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    if not r0 > 0:
        raise ValueError(f"r0 must be positive, got {r0!r}")
    if not 0.0 < u < 1.0:
        raise ValueError(f"u must lie in (0, 1), got {u!r}")
    return r0 * u ** (-1.0 / beta)


@nb.njit(cache=True)
def _gap(beta, r0, u):
    return r0 * u ** (-1.0 / beta)


@nb.njit(cache=True)
def _side_positions(seed, env, side, beta, r0, reach):
    """Cumulative scatterer distances on one side until one lies beyond ``reach``."""
    key = rng.hash_key(seed, rng.STREAM_ENV, env, side, 0)
    cap = 64
    out = np.empty(cap, dtype=np.float64)
    acc = 0.0
    k = 0
    while True:
        acc += _gap(beta, r0, rng.uniform(key, k))
        if k == cap:
            grown = np.empty(2 * cap, dtype=np.float64)
            grown[:cap] = out
            out = grown
            cap *= 2
        out[k] = acc
        k += 1
        if acc > reach:
            break
    return out[:k].copy()


class QuenchedEnvironment:
    """Frozen scatterer array for one environment index.

    Positions are generated on demand. Because each gap depends only on its
    own counter, the array is identical however and in whatever order it is
    extended.
    """

    def __init__(self, beta: float, r0: float = 1.0, seed: int = 0, index: int = 0):
        if not beta > 0:
            raise ValueError(f"beta must be positive, got {beta!r}")
        if not r0 > 0:
            raise ValueError(f"r0 must be positive, got {r0!r}")
        self.beta = float(beta)
        self.r0 = float(r0)
        self.seed = int(seed)
        self.index = int(index)
        self._pos = {RIGHT: np.empty(0), LEFT: np.empty(0)}

    def gaps(self, side: int, start: int, count: int) -> np.ndarray:
        u = rng.uniform_array(self.seed, (rng.STREAM_ENV, self.index, side), start, count)
        return self.r0 * u ** (-1.0 / self.beta)

    def extend(self, side: int, count: int) -> None:
        """Make sure at least ``count`` scatterers exist on ``side``."""
        have = self._pos[side]
        if count <= have.size:
            return
        offset = have[-1] if have.size else 0.0
        # sequential accumulation, so the result matches a single long pass
        fresh = np.cumsum(np.concatenate([[offset], self.gaps(side, have.size, count - have.size)]))[1:]
        self._pos[side] = np.concatenate([have, fresh])

    def distances(self, side: int, count: int) -> np.ndarray:
        """Distances from the origin of the first ``count`` scatterers on ``side``."""
        self.extend(side, count)
        return self._pos[side][:count].copy()

    def covering(self, side: int, reach: float) -> np.ndarray:
        """Distances on ``side`` up to and including the first one beyond ``reach``."""
        pos = self._pos[side]
        while pos.size == 0 or pos[-1] <= reach:
            self.extend(side, max(64, 2 * pos.size))
            pos = self._pos[side]
        stop = int(np.searchsorted(pos, reach, side="right")) + 1
        return pos[:stop].copy()

    def positions(self, reach: float) -> np.ndarray:
        """Signed, sorted scatterer positions covering ``[-reach, reach]``."""
        right = self.covering(RIGHT, reach)
        left = self.covering(LEFT, reach)
        return np.concatenate([-left[::-1], right])


@dataclass(frozen=True)
class WalkConfig:
    """Budget and sampling for an ensemble of quenched walks."""

    t_max: float
    sample_times: tuple
    n_env: int = 1
    n_walkers: int = 1
    velocity: float = 1.0
    seed: int = 0

    def __post_init__(self):
        times = tuple(float(t) for t in self.sample_times)
        object.__setattr__(self, "sample_times", times)
        if not self.velocity > 0:
            raise ValueError("velocity must be positive")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.n_env < 1 or self.n_walkers < 1:
            raise ValueError("need at least one environment and one walker")
        if not times:
            raise ValueError("sample_times is empty")
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError("sample_times must be sorted")
        if times[0] <= 0 or times[-1] > self.t_max:
            raise ValueError("sample_times must lie in (0, t_max]")

    @classmethod
    def geometric(cls, t_max: float, points: int | None = None, t_min: float = 1.0,
                  **kw) -> "WalkConfig":
        times = geometric_grid(t_min, t_max, points)
        return cls(t_max=t_max, sample_times=tuple(times), **kw)


@nb.njit(cache=True)
def _walk(right, left, v, times, key, pos_out, visit_out):
    """One event-driven walk; fills positions and visited counts at ``times``.

    Scatterers carry signed indices: ``k > 0`` sits at ``right[k-1]``,
    ``k < 0`` at ``-left[-k-1]``. Index 0 is the origin, which is not a
    scatterer. Visited scatterers always form a contiguous block, so the
    count is ``max_right + max_left``.
    """
    ns = times.shape[0]
    x = 0.0
    t = 0.0
    k = 0
    d = 1 if rng.uniform(key, 0) < 0.5 else -1
    event = 1
    max_r = 0
    max_l = 0
    si = 0
    while si < ns:
        nxt = k + d
        if nxt == 0:
            nxt = d
        if nxt > 0:
            if nxt > right.shape[0]:
                break
            px = right[nxt - 1]
        else:
            if -nxt > left.shape[0]:
                break
            px = -left[-nxt - 1]
        t_hit = t + abs(px - x) / v
        while si < ns and times[si] <= t_hit:
            pos_out[si] = x + d * v * (times[si] - t)
            visit_out[si] = max_r + max_l
            si += 1
        x = px
        t = t_hit
        k = nxt
        if k > max_r:
            max_r = k
        elif -k > max_l:
            max_l = -k
        if rng.uniform(key, event) >= 0.5:
            d = -d
        event += 1
    # only reachable if the environment was cut short; flag with NaN
    while si < ns:
        pos_out[si] = np.nan
        visit_out[si] = -1
        si += 1


@nb.njit(cache=True)
def _forced_walk(right, left, v, times, coins, pos_out, visit_out):
    """Same dynamics as ``_walk`` driven by an explicit coin sequence.

    ``coins[0]`` is the initial heading (1 right, 0 left); ``coins[k]`` for
    ``k >= 1`` is 1 to reflect at the ``k``-th scatterer hit. The sequence is
    reused cyclically.
    """
    ns = times.shape[0]
    nc = coins.shape[0]
    x = 0.0
    t = 0.0
    k = 0
    d = 1 if coins[0] == 1 else -1
    event = 1
    max_r = 0
    max_l = 0
    si = 0
    while si < ns:
        nxt = k + d
        if nxt == 0:
            nxt = d
        if nxt > 0:
            px = right[nxt - 1]
        else:
            px = -left[-nxt - 1]
        t_hit = t + abs(px - x) / v
        while si < ns and times[si] <= t_hit:
            pos_out[si] = x + d * v * (times[si] - t)
            visit_out[si] = max_r + max_l
            si += 1
        x = px
        t = t_hit
        k = nxt
        if k > max_r:
            max_r = k
        elif -k > max_l:
            max_l = -k
        c = coins[1 + (event - 1) % (nc - 1)] if nc > 1 else 0
        if c == 1:
            d = -d
        event += 1


@nb.njit(cache=True, parallel=True)
def _run_block(seed, beta, r0, v, t_max, times, env_ids, n_walkers, pos, visits):
    reach = v * t_max
    for i in nb.prange(env_ids.shape[0]):
        e = env_ids[i]
        right = _side_positions(seed, e, 0, beta, r0, reach)
        left = _side_positions(seed, e, 1, beta, r0, reach)
        for w in range(n_walkers):
            key = rng.hash_key(seed, rng.STREAM_COIN, e, w, 0)
            _walk(right, left, v, times, key, pos[i, w], visits[i, w])


def simulate_walk(env: QuenchedEnvironment, cfg: WalkConfig, walker_id: int = 0,
                  coins=None) -> tuple[np.ndarray, np.ndarray]:
    """Positions and visited-scatterer counts of one walker at ``cfg.sample_times``.

    With ``coins`` given, the walk is driven by that explicit 0/1 sequence
    instead of the counter-based coin stream (see ``_forced_walk``).
    """
    reach = cfg.velocity * cfg.t_max
    right = env.covering(RIGHT, reach)
    left = env.covering(LEFT, reach)
    times = np.asarray(cfg.sample_times, dtype=np.float64)
    pos = np.empty(times.size)
    visits = np.empty(times.size, dtype=np.int64)
    if coins is None:
        key = rng.hash_key(np.uint64(env.seed), rng.STREAM_COIN, env.index, walker_id, 0)
        _walk(right, left, float(cfg.velocity), times, np.uint64(key), pos, visits)
    else:
        coins = np.asarray(coins, dtype=np.int64)
        if coins.size == 0:
            raise ValueError("coin sequence is empty")
        _forced_walk(right, left, float(cfg.velocity), times, coins, pos, visits)
    return pos, visits


@dataclass
class WalkRun:
    """Raw output of an ensemble: one row per (environment, walker)."""

    config: WalkConfig
    beta: float
    r0: float
    positions: np.ndarray  # (n_env, n_walkers, n_times)
    visits: np.ndarray  # same shape, int64
    meta: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return np.asarray(self.config.sample_times)

    def moment(self, p: float) -> np.ndarray:
        """Double average of ``|r|**p`` over environments and walkers."""
        a = np.abs(self.positions) ** p
        flat = a.reshape(-1, a.shape[-1])
        return np.array([compensated_sum(flat[:, i]) for i in range(flat.shape[1])]) / flat.shape[0]

    def signed_moment(self, p: int) -> np.ndarray:
        a = self.positions ** p
        flat = a.reshape(-1, a.shape[-1])
        return np.array([compensated_sum(flat[:, i]) for i in range(flat.shape[1])]) / flat.shape[0]

    def mean_visits(self) -> np.ndarray:
        flat = self.visits.reshape(-1, self.visits.shape[-1]).astype(np.float64)
        return np.array([compensated_sum(flat[:, i]) for i in range(flat.shape[1])]) / flat.shape[0]


def run_walks(cfg: WalkConfig, beta: float, r0: float = 1.0, threads: int | None = None) -> WalkRun:
    """Simulate ``cfg.n_env * cfg.n_walkers`` walks.

    Environments are processed in parallel; each writes only its own slice,
    so the result does not depend on ``threads``.
    """
    if not beta > 0 or not r0 > 0:
        raise ValueError("beta and r0 must be positive")
    times = np.asarray(cfg.sample_times, dtype=np.float64)
    env_ids = np.arange(cfg.n_env, dtype=np.int64)
    pos = np.empty((cfg.n_env, cfg.n_walkers, times.size))
    visits = np.empty((cfg.n_env, cfg.n_walkers, times.size), dtype=np.int64)
    previous = nb.get_num_threads()
    if threads is not None:
        nb.set_num_threads(max(1, min(int(threads), nb.config.NUMBA_NUM_THREADS)))
    try:
        _run_block(np.uint64(cfg.seed), float(beta), float(r0), float(cfg.velocity), float(cfg.t_max),
                   times, env_ids, cfg.n_walkers, pos, visits)
    finally:
        nb.set_num_threads(previous)
    if np.isnan(pos).any():
        raise RuntimeError("environment too short for the requested horizon")
    return WalkRun(config=cfg, beta=float(beta), r0=float(r0), positions=pos, visits=visits)


def ensemble_moments(cfg: WalkConfig, beta: float, r0: float = 1.0, p: float = 2.0,
                     run: WalkRun | None = None) -> list[tuple[float, float]]:
    """``[(t, <|r|^p>)]`` averaged over environments and walkers."""
    run = run if run is not None else run_walks(cfg, beta, r0)
    return list(zip(run.times.tolist(), run.moment(p).tolist()))


def visited_sites(cfg: WalkConfig, beta: float, r0: float = 1.0,
                  run: WalkRun | None = None) -> list[tuple[float, float]]:
    """``[(t, <N(t)>)]``: mean number of distinct scatterers hit by time ``t``."""
    run = run if run is not None else run_walks(cfg, beta, r0)
    return list(zip(run.times.tolist(), run.mean_visits().tolist()))


def alpha_from_beta(beta: float) -> float:
    """Slicer parameter whose MSD exponent matches the quenched walk at ``beta``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    if beta <= 1.0:
        return beta * beta / (1.0 + beta)
    if beta <= 1.5:
        return beta - 0.5
    return 1.0


class MarginalCase(ValueError):
    """Raised on the lines where the moment-exponent table has no branch."""


def predicted_moment_exponent(beta: float, p: float) -> float:
    """Growth exponent of ``<|r|^p>`` for the quenched walk.

    Raises
    ------
    MarginalCase
        At ``beta == 1``, ``p == beta`` (beta < 1) or ``p == 2*beta - 1``
        (beta > 1), where only strict inequalities are available.
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    if not p > 0:
        raise ValueError(f"p must be positive, got {p!r}")
    if beta == 1.0:
        raise MarginalCase("beta = 1 lies between the two regimes")
    if beta < 1.0:
        if p == beta:
            raise MarginalCase(f"p = beta = {beta} is a branch boundary")
        if p < beta:
            return p / (1.0 + beta)
        return (p * (1.0 + beta) - beta * beta) / (1.0 + beta)
    if p == 2.0 * beta - 1.0:
        raise MarginalCase(f"p = 2*beta - 1 = {p} is a branch boundary")
    if p < 2.0 * beta - 1.0:
        return p / 2.0
    return 0.5 + p - beta


def predicted_msd_exponent(beta: float) -> float:
    """MSD exponent, including the beta = 1 and beta > 3/2 cases."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    if beta < 1.0:
        return (2.0 + 2.0 * beta - beta * beta) / (1.0 + beta)
    if beta <= 1.5:
        return 2.5 - beta
    return 1.0


def predicted_visited_exponent(beta: float) -> float:
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    return beta / (1.0 + beta) if beta < 1.0 else 0.5
