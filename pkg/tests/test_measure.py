import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import partition_areas
from slicerdyn import closed_form, measure
from slicerdyn.measure import HALF, ONE, ZERO, L, one_minus_L
from slicerdyn.slicer import SlicerFamily

ALPHAS = [1 / 3, 0.5, 1.0, 1.5, 2.0]


def test_uniform_initial():
    occ = measure.uniform_initial()
    assert occ.time == 0
    assert occ.cells == {0: [(ZERO, ONE)]}
    assert occ.support() == [0]
    assert measure.areas(occ) == {0: 1.0}


def test_endpoint_values_and_tags():
    fam = SlicerFamily(1.0)
    assert ZERO.value(fam) == 0.0 and HALF.value(fam) == 0.5 and ONE.value(fam) == 1.0
    assert L(3).value(fam) == pytest.approx(0.2)
    assert one_minus_L(-3).value(fam) == pytest.approx(0.8)
    # one tag per value: l_0 and 1 - l_0 are the half point, l_j = l_{-j}
    assert L(0) == HALF == one_minus_L(0)
    assert L(-4) == L(4)
    assert str(L(2)) == "l2" and str(one_minus_L(2)) == "1-l2"
    with pytest.raises(ValueError):
        L(1).value(None)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_one_step_halves(alpha):
    fam = SlicerFamily(alpha)
    assert measure.areas(measure.evolve_to(fam, 1)) == {-1: 0.5, 1: 0.5}


def test_two_step_examples():
    got = measure.areas(measure.evolve_to(SlicerFamily(1.0), 2))
    assert got == pytest.approx({-2: 1 / 3, 0: 1 / 3, 2: 1 / 3}, rel=1e-15)
    got = measure.areas(measure.evolve_to(SlicerFamily(0.5), 2))
    r5 = 1 / math.sqrt(5)
    assert got == pytest.approx({-2: r5, 0: 1 - 2 * r5, 2: r5}, rel=1e-15)


def test_single_step_matches_generator():
    fam = SlicerFamily(0.5)
    occ = measure.uniform_initial(fam)
    for k, snap in enumerate(measure.evolve(fam, 12), start=1):
        occ = measure.evolve_occupancy(fam, occ)
        assert occ.time == snap.time == k
        assert occ.cells == snap.cells


def test_family_mismatch_is_rejected():
    occ = measure.evolve_to(SlicerFamily(1.0), 3)
    with pytest.raises(ValueError):
        measure.evolve_occupancy(SlicerFamily(0.5), occ)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_structure_over_time(alpha):
    fam = SlicerFamily(alpha)
    for occ in measure.evolve(fam, 120):
        n = occ.time
        a = measure.areas(occ)
        assert all(abs(j) <= n and (j - n) % 2 == 0 for j in a)
        assert abs(sum(a.values()) - 1.0) <= 1e-12
        for j in a:
            assert a[j] == pytest.approx(a[-j], abs=1e-15)
        assert a[n] == pytest.approx(fam.position(n - 1), rel=1e-14)
        assert measure.interval_count(occ) <= 6 * n + 4
        # half-open intervals in each cell are sorted, disjoint and non-empty
        for ivals in occ.cells.values():
            vals = [(occ.value(x), occ.value(y)) for x, y in ivals]
            assert all(x < y for x, y in vals)
            assert all(p[1] <= q[0] for p, q in zip(vals, vals[1:]))
        # the symbolic length telescopes to exactly 1 - 0
        assert measure.symbolic_total(occ) == Counter({ONE: 1, ZERO: -1})


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("n", [1, 2, 3, 10, 25, 40])
def test_against_pointwise_partition(alpha, n):
    got = measure.areas(measure.evolve_to(SlicerFamily(alpha), n))
    want = partition_areas(alpha, n)
    assert set(got) == set(want)
    for j in want:
        assert got[j] == pytest.approx(want[j], abs=1e-14)


@given(st.floats(min_value=0.1, max_value=3.0), st.integers(min_value=1, max_value=40))
def test_matches_closed_form_for_random_alpha(alpha, n):
    got = measure.areas(measure.evolve_to(SlicerFamily(alpha), n))
    want = closed_form.coarse_distribution(alpha, n).as_dict()
    assert set(got) == set(want)
    assert max(abs(got[j] - want[j]) for j in want) <= 1e-13


def test_endpoint_rows_cover_each_cell_length():
    fam = SlicerFamily(1 / 3)
    occ = measure.evolve_to(fam, 9)
    lengths = {}
    for m, a, b in measure.endpoint_rows(occ):
        assert 0.0 <= a < b <= 1.0
        lengths[m] = lengths.get(m, 0.0) + (b - a)
    assert lengths == pytest.approx(measure.areas(occ), abs=1e-15)


@pytest.mark.slow
def test_mass_conservation_to_ten_thousand_steps():
    fam = SlicerFamily(0.5)
    occ = measure.evolve_to(fam, 10_000)
    assert abs(sum(measure.areas(occ).values()) - 1.0) <= 1e-12
    assert measure.symbolic_total(occ) == Counter({ONE: 1, ZERO: -1})
