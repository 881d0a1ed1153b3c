import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slicerdyn import analysis as an
from slicerdyn import closed_form as cf
from slicerdyn import levy


def test_exact_power_law_is_recovered():
    t = np.geomspace(10, 1e4, 30)
    fit = an.fit_power_law(np.column_stack([t, 3 * t ** 1.5]), window=(10, 1e4))
    assert fit.exponent == pytest.approx(1.5, abs=1e-12)
    assert fit.amplitude == pytest.approx(3.0, rel=1e-10)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.points == 30


@given(st.floats(min_value=-3, max_value=3), st.floats(min_value=1e-3, max_value=1e3))
def test_synthetic_power_laws(g, a):
    t = np.geomspace(1, 1e5, 40)
    fit = an.fit_power_law(np.column_stack([t, a * t ** g]))
    assert fit.exponent == pytest.approx(g, abs=1e-10)
    assert fit.window == (1e4, 1e5)


def test_fit_rejects_bad_input():
    t = np.array([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        an.fit_power_law(np.column_stack([t, [1.0, 0.0, 2.0]]), window=(1, 3))
    with pytest.raises(ValueError):
        an.fit_power_law(np.column_stack([t[:2], [1.0, 2.0]]), window=(1, 3))
    with pytest.raises(ValueError):
        an.fit_power_law([1, 2, 3])


def test_log_law():
    t = np.geomspace(10, 1e6, 50)
    fit = an.fit_log_law(np.column_stack([t, 7 * np.log(t)]), window=(10, 1e6))
    assert fit.slope == pytest.approx(7.0)
    assert fit.r_squared == pytest.approx(1.0)


def test_model_selection_prefers_the_true_law():
    t = np.geomspace(10, 1e6, 50)
    series = np.column_stack([t, t ** 0.5])
    assert an.fit_log_law(series, (10, 1e6)).r_squared < an.power_law_r2_linear(series, (10, 1e6))
    series = np.column_stack([t, 2 + np.log(t)])
    assert an.fit_log_law(series, (10, 1e6)).r_squared > an.power_law_r2_linear(series, (10, 1e6))


def test_generalized_diffusion_estimates():
    s = an.slicer_series(0.5, 10**4, 2)
    assert an.estimate_generalized_diffusion(s, 1.5) == pytest.approx(8 / 3, rel=0.05)
    s = an.slicer_series(1 / 3, 10**5, 2)
    assert an.estimate_generalized_diffusion(s, 5 / 3) == pytest.approx(12 / 5, rel=0.05)
    with pytest.raises(ValueError):
        an.estimate_generalized_diffusion(s, 2.5)
    with pytest.raises(ValueError):
        an.estimate_generalized_diffusion(s, 1.0, window=(1e7, 1e8))


def test_generalized_diffusion_converges_and_classifies():
    est = [an.estimate_generalized_diffusion(an.slicer_series(0.5, n, 2), 1.5)
           for n in (10**3, 10**4, 10**5)]
    err = [abs(e - 8 / 3) for e in est]
    assert err[0] > err[1] > err[2]
    above = [an.estimate_generalized_diffusion(an.slicer_series(0.5, n, 2), 1.7) for n in (10**3, 10**5)]
    below = [an.estimate_generalized_diffusion(an.slicer_series(0.5, n, 2), 1.3) for n in (10**3, 10**5)]
    assert above[1] < above[0] and below[1] > below[0]


def test_geometric_steps_density():
    ns = an.geometric_steps(10**5)
    assert ns[0] == 1 and ns[-1] == 10**5
    assert np.all(np.diff(ns) > 0)
    assert np.sum(ns >= 10**4) >= 20


@pytest.mark.parametrize("alpha, p", [(0.5, 2), (1 / 3, 4)])
def test_slicer_exponents(alpha, p):
    fit = an.slicer_fit_exponent(alpha, 10**5, p)
    assert fit.exponent == pytest.approx(p - alpha, abs=0.05 if p > 2 else 0.02)


def test_comparison_report_structure():
    budget = an.LevyBudget(t_max=2e3, n_env=20, n_walkers=10, seed=3, slicer_n_max=2000)
    rep = an.compare_slicer_levy(1.25, (2, 4), budget)
    assert rep.alpha == 0.75
    r2, r4 = rep.rows
    assert r2.slicer_theory == pytest.approx(1.25) and r2.levy_theory == pytest.approx(1.25)
    assert r4.slicer_theory == pytest.approx(3.25) and r4.levy_theory == pytest.approx(3.25)
    assert r4.delta_theory == pytest.approx(0.0, abs=1e-12)
    for r in rep.rows:
        assert r.agree == (r.delta_fit <= an.AGREEMENT_THRESHOLD)
    assert rep.flagged == [r for r in rep.rows if not r.agree]
    data = json.loads(rep.to_json())
    assert data["budget"]["seed"] == 3 and len(data["rows"]) == 2
    assert "beta = 1.25" in rep.to_table()


def test_comparison_notes_marginal_lines():
    budget = an.LevyBudget(t_max=500, n_env=5, n_walkers=5, slicer_n_max=500)
    rep = an.compare_slicer_levy(1.5, (2, 4), budget)
    # p = 2 uses the msd formula; p = 4 is off the marginal line
    assert rep.rows[0].levy_theory == 1.0 and rep.rows[0].note == ""
    rep = an.compare_slicer_levy(1.25, (1.5,), budget)
    assert rep.rows[0].levy_theory is None and "branch boundary" in rep.rows[0].note


def test_exponent_identity_on_a_grid():
    for beta in 1.5 * (np.arange(100) + 0.5) / 100:
        for p in (2, 4, 6):
            assert levy.predicted_moment_exponent(beta, p) == pytest.approx(
                p - levy.alpha_from_beta(beta), abs=1e-12)


def test_slicer_series_uses_absolute_moments():
    s = an.slicer_series(0.5, 100, 3)
    assert np.all(s[:, 1] > 0)
    assert s[-1, 1] == cf.moment(0.5, 100, 3, absolute=True)
