import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicerdyn import closed_form as cf
from slicerdyn import ensemble as mc
from slicerdyn.slicer import LatticePoint, SlicerFamily, coarse_trajectory


def test_config_validation():
    with pytest.raises(ValueError):
        mc.EnsembleConfig(1.0, 0, 5)
    with pytest.raises(ValueError):
        mc.EnsembleConfig(0.0, 10, 5)
    with pytest.raises(ValueError):
        mc.EnsembleConfig(1.0, 10, 5, sample_times=(3, 2))
    with pytest.raises(ValueError):
        mc.EnsembleConfig(1.0, 10, 5, sample_times=(6,))
    assert mc.EnsembleConfig(1.0, 10, 5).sample_times == (5,)


def test_initial_points_are_uniform_and_mirrorable():
    x = mc.initial_points(3, 100_000)
    assert np.all((x > 0) & (x < 1))
    assert abs(x.mean() - 0.5) < 0.005
    assert np.array_equal(mc.initial_points(3, 100_000, mirror=True), 1 - x)
    assert np.array_equal(mc.initial_points(3, 10), x[:10])


def test_paths_agree_with_pointwise_dynamics():
    cfg = mc.EnsembleConfig(0.5, 300, 400, seed=11, sample_times=tuple(range(401)))
    paths = mc.cell_paths(cfg)
    fam = SlicerFamily(0.5)
    for i, x in enumerate(mc.initial_points(11, 300)):
        assert paths[:, i].tolist() == coarse_trajectory(fam, LatticePoint(float(x), 0), 400)


def test_one_step_splits_in_two():
    h = mc.run_ensemble(mc.EnsembleConfig(0.8, 20_000, 1, seed=5))[0]
    assert h.cells.tolist() == [-1, 1]
    assert h.total == 20_000
    assert abs(h.counts[0] / h.total - 0.5) < 4 * np.sqrt(0.25 / h.total)


def test_two_steps_alpha_one():
    N = 100_000
    h = mc.run_ensemble(mc.EnsembleConfig(1.0, N, 2, seed=1))[0]
    assert h.cells.tolist() == [-2, 0, 2]
    tol = 3 * np.sqrt(1 / 3 * 2 / 3 / N)
    assert np.all(np.abs(h.frequencies() - 1 / 3) < tol)


@settings(max_examples=25)
@given(st.floats(min_value=0.2, max_value=2.0), st.integers(min_value=1, max_value=2000),
       st.integers(min_value=0, max_value=300), st.integers(min_value=0, max_value=2**63))
def test_histogram_support_parity_and_count(alpha, N, n, seed):
    for h in mc.run_ensemble(mc.EnsembleConfig(alpha, N, n, seed, sample_times=(0, n // 2, n))):
        assert h.total == N
        assert np.all(np.abs(h.cells) <= h.time)
        assert np.all((h.cells - h.time) % 2 == 0)


def test_mirror_reflects_histogram_exactly():
    times = (1, 10, 99, 100)
    a = mc.run_ensemble(mc.EnsembleConfig(1 / 3, 5000, 100, 9, times))
    b = mc.run_ensemble(mc.EnsembleConfig(1 / 3, 5000, 100, 9, times, mirror=True))
    for ha, hb in zip(a, b):
        assert ha.as_dict() == {-j: c for j, c in hb.as_dict().items()}


def test_time_zero_is_the_origin():
    cfg = mc.EnsembleConfig(0.5, 50, 0)
    assert mc.msd_series(cfg) == [(0, 0.0)]


def test_thread_count_does_not_change_results():
    cfg = mc.EnsembleConfig.geometric(0.5, 20_000, 3000, seed=2)
    assert np.array_equal(mc.cell_paths(cfg, threads=1), mc.cell_paths(cfg, threads=4))
    assert np.array_equal(mc.cell_paths(cfg), mc.cell_paths(cfg))


def test_seeds_differ():
    a = mc.cell_paths(mc.EnsembleConfig(0.5, 1000, 50, seed=0))
    b = mc.cell_paths(mc.EnsembleConfig(0.5, 1000, 50, seed=1))
    assert not np.array_equal(a, b)


def test_msd_is_the_histogram_second_moment():
    cfg = mc.EnsembleConfig.geometric(0.5, 3000, 500, seed=4)
    hists = mc.run_ensemble(cfg)
    msd = mc.msd_series(cfg, hists)
    for (n, v), h in zip(msd, hists):
        assert v == sum(c * j * j for j, c in h.as_dict().items()) / h.total
    assert msd == mc.msd_series(cfg)


def test_signed_first_moment_has_no_drift():
    cfg = mc.EnsembleConfig.geometric(0.5, 10_000, 1000, seed=8)
    hists = mc.run_ensemble(cfg)
    for (n, m1), h in zip(mc.empirical_moment(cfg, 1, hists), hists):
        se = mc.moment_stderr(h, 1)
        assert abs(m1) <= 5 * se + 1e-12


def test_fourth_moment_slope():
    cfg = mc.EnsembleConfig(0.5, 100_000, 10_000, seed=3, sample_times=(1000, 10_000))
    (n0, a), (n1, b) = mc.empirical_moment(cfg, 4)
    assert np.log(b / a) / np.log(n1 / n0) == pytest.approx(3.5, abs=0.15)


def test_empirical_moment_rejects_p_zero():
    with pytest.raises(ValueError):
        mc.empirical_moment(mc.EnsembleConfig(0.5, 10, 3), 0)


def test_msd_approaches_exact_value():
    cfg = mc.EnsembleConfig(1.0, 200_000, 2, seed=6)
    (_, v), = mc.msd_series(cfg)
    h = mc.run_ensemble(cfg)[0]
    assert abs(v - 8 / 3) < 5 * mc.moment_stderr(h, 2)


def test_sup_norm_shrinks_with_ensemble_size():
    exact = cf.coarse_distribution(0.5, 100)
    dist = []
    for N in (10**3, 10**4, 10**5):
        h = mc.run_ensemble(mc.EnsembleConfig(0.5, N, 100, seed=12))[0]
        f = dict(zip(h.cells.tolist(), h.frequencies().tolist()))
        dist.append(max(abs(f.get(int(j), 0.0) - m) for j, m in zip(exact.cells, exact.mass)))
    assert dist[0] > dist[1] > dist[2]
