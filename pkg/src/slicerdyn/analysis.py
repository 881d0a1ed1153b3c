"""Scaling fits for moment series and the slicer/Lévy-walk comparison."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import closed_form, levy
from .grids import geometric_integers

__all__ = ["PowerLawFit", "LogLawFit", "fit_power_law", "fit_log_law", "last_decade",
           "estimate_generalized_diffusion", "LevyBudget", "ComparisonRow",
           "ComparisonReport", "compare_slicer_levy", "slicer_fit_exponent",
           "AGREEMENT_THRESHOLD", "geometric_steps", "slicer_series", "power_law_r2_linear"]

AGREEMENT_THRESHOLD = 0.15


def _as_arrays(series) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(series, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("series must be a sequence of (t, y) pairs")
    return arr[:, 0], arr[:, 1]


def last_decade(t: np.ndarray) -> tuple[float, float]:
    t_max = float(np.max(t))
    return t_max / 10.0, t_max


def _window(series, window):
    t, y = _as_arrays(series)
    if window is None:
        window = last_decade(t)
    lo, hi = window
    sel = (t >= lo) & (t <= hi)
    t, y = t[sel], y[sel]
    if t.size < 3:
        raise ValueError(f"need at least 3 points in window {window}, got {t.size}")
    return t, y, (float(lo), float(hi))


def _linear(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares slope, intercept and r**2."""
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return float(slope), float(intercept), r2


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    amplitude: float
    window: tuple[float, float]
    r_squared: float
    points: int


@dataclass(frozen=True)
class LogLawFit:
    slope: float
    intercept: float
    window: tuple[float, float]
    r_squared: float
    points: int


def fit_power_law(series, window=None) -> PowerLawFit:
    """Fit ``y = A t**g`` by least squares on ``log y`` against ``log t``.

    ``window`` is an inclusive ``(t_min, t_max)``; the default is the last
    decade of the series.
    """
    t, y, window = _window(series, window)
    if np.any(t <= 0) or np.any(y <= 0):
        raise ValueError("power-law fits need strictly positive t and y")
    slope, intercept, r2 = _linear(np.log(t), np.log(y))
    return PowerLawFit(slope, float(np.exp(intercept)), window, r2, int(t.size))


def fit_log_law(series, window=None) -> LogLawFit:
    """Fit ``y = a log t + b``; r**2 is measured on ``y`` itself."""
    t, y, window = _window(series, window)
    if np.any(t <= 0) or np.any(y <= 0):
        raise ValueError("log-law fits need strictly positive t and y")
    slope, intercept, r2 = _linear(np.log(t), y)
    return LogLawFit(slope, intercept, window, r2, int(t.size))


def power_law_r2_linear(series, window=None) -> float:
    """r**2 of the best power law, measured on ``y`` (not ``log y``).

    Puts the power-law and log-law fits on the same footing for model
    selection.
    """
    fit = fit_power_law(series, window)
    t, y, _ = _window(series, window)
    pred = fit.amplitude * t ** fit.exponent
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum((y - pred) ** 2))
    return 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot


def estimate_generalized_diffusion(series, gamma: float, window=None) -> float:
    """Mean of ``y / t**gamma`` over the window (last decade by default)."""
    if not 0.0 <= gamma <= 2.0:
        raise ValueError(f"gamma must lie in [0, 2], got {gamma!r}")
    t, y = _as_arrays(series)
    if t.size == 0:
        raise ValueError("empty series")
    lo, hi = last_decade(t) if window is None else window
    sel = (t >= lo) & (t <= hi)
    if not np.any(sel):
        raise ValueError("no points in the tail window")
    return float(np.mean(y[sel] / t[sel] ** gamma))


def geometric_steps(n_max: int, points: int | None = None, n_min: int = 1) -> np.ndarray:
    return geometric_integers(n_max, points, n_min)


def slicer_series(alpha: float, n_max: int, p: int, points: int | None = None, absolute: bool = True):
    """Closed-form ``(n, <|dX|^p>)`` on geometric steps up to ``n_max``."""
    ns = geometric_steps(n_max, points)
    ys = closed_form.moment_series(alpha, ns, p, absolute=absolute)
    return np.column_stack([ns.astype(np.float64), ys])


def slicer_fit_exponent(alpha: float, n_max: int, p: int = 2, points: int | None = None) -> PowerLawFit:
    return fit_power_law(slicer_series(alpha, n_max, p, points))


@dataclass(frozen=True)
class LevyBudget:
    t_max: float = 1e5
    n_env: int = 200
    n_walkers: int = 50
    r0: float = 1.0
    velocity: float = 1.0
    seed: int = 0
    points: int | None = None
    slicer_n_max: int = 100_000

    def walk_config(self) -> levy.WalkConfig:
        return levy.WalkConfig.geometric(self.t_max, points=self.points, n_env=self.n_env,
                                         n_walkers=self.n_walkers, velocity=self.velocity,
                                         seed=self.seed)


@dataclass
class ComparisonRow:
    p: float
    slicer_theory: float | None
    slicer_fit: float
    levy_theory: float | None
    levy_fit: float
    delta_fit: float
    delta_theory: float | None
    agree: bool
    note: str = ""


@dataclass
class ComparisonReport:
    beta: float
    alpha: float
    budget: dict
    rows: list[ComparisonRow] = field(default_factory=list)
    drift: dict = field(default_factory=dict)

    @property
    def flagged(self) -> list[ComparisonRow]:
        return [r for r in self.rows if not r.agree]

    def to_dict(self) -> dict:
        return {"beta": self.beta, "alpha": self.alpha, "budget": self.budget,
                "threshold": AGREEMENT_THRESHOLD,
                "rows": [asdict(r) for r in self.rows], "drift": self.drift}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        def f(v):
            return "   -   " if v is None else f"{v:7.4f}"

        lines = [f"beta = {self.beta:g}   alpha = {self.alpha:.6g}",
                 "   p   slicer(th)  slicer(fit)  levy(th)  levy(fit)  |d fit|  ok"]
        for r in self.rows:
            lines.append(f"{r.p:4g}   {f(r.slicer_theory)}    {f(r.slicer_fit)}    {f(r.levy_theory)}"
                         f"   {f(r.levy_fit)}   {r.delta_fit:6.3f}  {'yes' if r.agree else 'NO'}"
                         + (f"  ({r.note})" if r.note else ""))
        return "\n".join(lines)


def _levy_theory(beta: float, p: float) -> tuple[float | None, str]:
    if p == 2:
        return levy.predicted_msd_exponent(beta), ""
    try:
        return levy.predicted_moment_exponent(beta, p), ""
    except levy.MarginalCase as exc:
        return None, str(exc)


def compare_slicer_levy(beta: float, p_list=(2,), budget: LevyBudget | None = None,
                        run: levy.WalkRun | None = None) -> ComparisonReport:
    """Fitted and predicted growth exponents of ``<|x|^p>`` for both processes.

    The slicer side uses the exact moment series at ``alpha_from_beta(beta)``;
    the walk side is simulated. Both are fitted over their last decade.
    """
    budget = budget or LevyBudget()
    alpha = levy.alpha_from_beta(beta)
    if run is None:
        run = levy.run_walks(budget.walk_config(), beta, budget.r0)
    report = ComparisonReport(beta, alpha, asdict(budget))
    t = run.times
    for p in p_list:
        s_fit = slicer_fit_exponent(alpha, budget.slicer_n_max, int(p)).exponent
        l_series = np.column_stack([t, run.moment(p)])
        l_fit = fit_power_law(l_series).exponent
        l_th, note = _levy_theory(beta, p)
        s_th = p - alpha if not (p == 2 and alpha == 2) else None
        delta = abs(s_fit - l_fit)
        report.rows.append(ComparisonRow(
            p=p, slicer_theory=s_th, slicer_fit=s_fit, levy_theory=l_th, levy_fit=l_fit,
            delta_fit=delta,
            delta_theory=None if (s_th is None or l_th is None) else abs(s_th - l_th),
            agree=delta <= AGREEMENT_THRESHOLD, note=note))
    first = run.signed_moment(1)
    report.drift = {"levy_signed_mean_last": float(first[-1]),
                    "slicer_signed_mean": 0.0}
    return report
