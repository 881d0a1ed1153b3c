"""Closed-form distributions, moments and asymptotic constants of the slicer map.

All quantities assume the uniform initial density on cell 0. With
``l_j = (|j| + 2**(1/alpha))**(-alpha)``, after ``n`` steps the mass is
``l_{n-1}`` on each of ``+-n`` (the travelling areas), ``l_{|j|-1} - l_{|j|+1}``
on the other occupied cells of the parity of ``n``, and ``1 - 2 l_1`` on cell
0 for even ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .slicer import SlicerFamily
from .summation import compensated_cumsum, compensated_sum

__all__ = [
    "CoarseGrainedDistribution",
    "MomentValue",
    "Transport",
    "traveling_area",
    "subtraveling_area",
    "coarse_distribution",
    "moment",
    "moment_series",
    "transport_exponent",
    "generalized_diffusion_coefficient",
    "moment_limit_constant",
    "asymptotic_tail",
    "tail_constant",
]


def _family(alpha) -> SlicerFamily:
    return alpha if isinstance(alpha, SlicerFamily) else SlicerFamily(alpha)


def _ell_gap(fam: SlicerFamily, j: np.ndarray) -> np.ndarray:
    """``l_{j-1} - l_{j+1}`` for integer ``j >= 1`` without cancellation."""
    c = fam.offset
    a = fam.alpha
    lo = j - 1 + c
    hi = j + 1 + c
    # l_{j-1} (1 - (lo/hi)**alpha), with the bracket via expm1/log1p
    out = lo ** (-a) * -np.expm1(a * np.log1p(-2.0 / hi))
    # l_0 is pinned to 1/2 and is not lo**(-a) in binary64 for every alpha
    first = j == 1
    if np.any(first):
        out = np.where(first, 0.5 - fam.positions(2), out)
    return out


def traveling_area(alpha, n: int) -> float:
    """Mass sitting on cell ``n`` (and ``-n``) after ``n`` steps."""
    if n < 1:
        raise ValueError(f"travelling areas need n >= 1, got {n}")
    return _family(alpha).position(n - 1)


def subtraveling_area(alpha, j: int) -> float:
    """``l_{|j|-1} - l_{|j|+1}``; the central cell is handled by ``coarse_distribution``."""
    j = abs(int(j))
    if j == 0:
        raise ValueError("j = 0 carries 2(l_0 - l_1); use coarse_distribution")
    return float(_ell_gap(_family(alpha), np.array([j], dtype=np.float64))[0])


@dataclass(frozen=True)
class CoarseGrainedDistribution:
    """Cell masses at time ``n``; ``cells`` is sorted and symmetric."""

    alpha: float
    n: int
    cells: np.ndarray
    mass: np.ndarray

    def __getitem__(self, j: int) -> float:
        if abs(j) > self.n or (j - self.n) % 2:
            return 0.0
        return float(self.mass[(j + self.n) // 2])

    def as_dict(self) -> dict[int, float]:
        return {int(j): float(m) for j, m in zip(self.cells, self.mass)}

    def total(self) -> float:
        return compensated_sum(self.mass)

    def moment(self, p: int) -> float:
        """Direct ``sum_j mass_j j**p``, summed as written (no telescoping)."""
        return compensated_sum(self.mass * self.cells.astype(np.float64) ** p)


def coarse_distribution(alpha, n: int) -> CoarseGrainedDistribution:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    fam = _family(alpha)
    pos = np.arange(n % 2 or 2, n, 2, dtype=np.float64)  # interior positive cells
    half = np.concatenate([_ell_gap(fam, pos), [fam.position(n - 1)]])
    cells_pos = np.concatenate([pos, [n]]).astype(np.int64)
    if n % 2 == 0:
        centre = np.array([1.0 - 2.0 * fam.position(1)])
        mass = np.concatenate([half[::-1], centre, half])
        cells = np.concatenate([-cells_pos[::-1], [0], cells_pos])
    else:
        mass = np.concatenate([half[::-1], half])
        cells = np.concatenate([-cells_pos[::-1], cells_pos])
    return CoarseGrainedDistribution(fam.alpha, n, cells, mass)


def _power_step(j: np.ndarray, p: int) -> np.ndarray:
    """``j**p - max(j-2, 0)**p`` as a sum of positive terms."""
    b = np.maximum(j - 2.0, 0.0)
    acc = np.zeros_like(j)
    for k in range(p):
        acc += j ** (p - 1 - k) * b ** k
    return (j - b) * acc


def _half_terms(fam: SlicerFamily, j: np.ndarray, p: int) -> np.ndarray:
    # summation by parts over one parity class: mass_j = T_j - T_{j+2}
    # with tail mass T_j = l_{j-1}
    return fam.positions((j - 1).astype(np.int64)) * _power_step(j, p)


@dataclass(frozen=True)
class MomentValue:
    alpha: float
    n: int
    p: int
    value: float

    def as_record(self) -> dict:
        return {"alpha": self.alpha, "n": self.n, "p": self.p, "value": self.value}


def moment(alpha, n: int, p: int, absolute: bool = False) -> float:
    """``sum_{j=-n}^{n} A_j j**p``; exactly zero for odd ``p``.

    With ``absolute=True`` the summand is ``A_j |j|**p``, which only differs
    for odd ``p``.

    The even case is evaluated in telescoped form,
    ``2 * sum_j l_{j-1} (j**p - (j-2)**p)`` over the positive cells of the
    parity of ``n``, so no nearly equal slicers are ever subtracted.
    """
    if n < 1 or p < 1:
        raise ValueError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    if p % 2 and not absolute:
        return 0.0
    fam = _family(alpha)
    j = np.arange(n % 2 or 2, n + 1, 2, dtype=np.float64)
    return 2.0 * compensated_sum(_half_terms(fam, j, p))


def moment_series(alpha, ns, p: int, absolute: bool = False) -> np.ndarray:
    """``moment(alpha, n, p)`` for every ``n`` in ``ns`` in one O(max n) pass."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size == 0:
        return np.empty(0)
    if ns.min() < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    if p % 2 and not absolute:
        return np.zeros(ns.size)
    fam = _family(alpha)
    n_max = int(ns.max())
    out = np.empty(ns.size)
    for parity in (0, 1):
        j = np.arange(parity or 2, n_max + 1, 2, dtype=np.float64)
        if j.size == 0:
            continue
        prefix = 2.0 * compensated_cumsum(_half_terms(fam, j, p))
        sel = ns % 2 == parity
        # cell n is entry (n - first) // 2 of its parity class
        out[sel] = prefix[(ns[sel] - (parity or 2)) // 2]
    return out


@dataclass(frozen=True)
class Transport:
    """Transport regime; ``exponent`` is None in the logarithmic case."""

    alpha: float
    exponent: float | None
    regime: str

    @property
    def logarithmic(self) -> bool:
        return self.regime == "logarithmic"


def transport_exponent(alpha: float) -> Transport:
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"transport classification covers alpha in (0, 2], got {alpha!r}")
    if alpha == 2.0:
        return Transport(alpha, None, "logarithmic")
    gamma = 2.0 - alpha
    if alpha > 1.0:
        regime = "sub-diffusive"
    elif alpha == 1.0:
        regime = "diffusive"
    else:
        regime = "super-diffusive"
    return Transport(alpha, gamma, regime)


def generalized_diffusion_coefficient(alpha: float) -> float:
    """Limit of ``msd / n**(2 - alpha)``, i.e. ``4 / (2 - alpha)``."""
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha!r}")
    return 4.0 / (2.0 - alpha)


def moment_limit_constant(alpha: float, p: int) -> float:
    """Limit of ``moment(alpha, n, p) / n**(p - alpha)`` for even ``p``.

    One side contributes ``alpha/(p - alpha)`` from the interior cells and
    ``1`` from the travelling area; doubling gives ``2p/(p - alpha)``.
    """
    if p < 2 or p % 2:
        raise ValueError(f"p must be even and >= 2, got {p}")
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha!r}")
    if p == 2 and alpha == 2.0:
        raise ValueError("alpha = 2, p = 2 grows like log n; no power-law constant")
    return 2.0 * p / (p - alpha)


def tail_constant(alpha: float) -> float:
    """Large-``j`` amplitude of the interior masses: ``2 * alpha``."""
    return 2.0 * float(alpha)


def asymptotic_tail(alpha: float, m, C: float | None = None):
    """``C / (m + 2**(1/alpha))**(alpha + 1)``; ``C`` defaults to ``2 * alpha``.

    For ``alpha = 1/2`` the default is 1.
    """
    if C is None:
        C = tail_constant(alpha)
    m = np.asarray(m, dtype=np.float64)
    if np.any(m < 0):
        raise ValueError("m must be non-negative")
    out = C / (m + 2.0 ** (1.0 / alpha)) ** (alpha + 1.0)
    return float(out) if out.ndim == 0 else out
