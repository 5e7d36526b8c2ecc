import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from siegelren import circle, rotnum
from siegelren.rotnum import RotationNumber as R

from conftest import coprime_pairs, quadratics

# measured bounds on the arc ratio over all convergent triangulations with q <= 1e4
# (float gaps at q ~ 1e4 carry ~1e-9 relative rounding, hence rel=1e-6 below)
GOLDEN_TRIANGULATION_BOUND = 1.618034
SILVER_TRIANGULATION_BOUND = 1.414214


def test_arc_membership_wraps():
    arc = circle.Arc(0.9, 0.2)
    assert 0.95 in arc and 0.05 in arc and 0.15 not in arc
    assert arc.end == pytest.approx(0.1)
    with pytest.raises(ValueError):
        circle.Arc(0, 1)


def test_rotation_orbit_exact():
    assert circle.rotation_orbit(R.rational(2, 5), 5) == [Fraction(k * 2 % 5, 5) for k in range(5)]


def test_fundamental_sector():
    assert circle.fundamental_sector(R.rational(1, 3)) == circle.Arc(Fraction(0), Fraction(1, 3))
    s = circle.fundamental_sector(rotnum.golden())
    assert s.length == pytest.approx(1 - float(rotnum.golden()))
    with pytest.raises(ValueError):
        circle.fundamental_sector(R.rational(0))


@pytest.mark.parametrize("pq,times", [((1, 3), (2, 1)), ((1, 5), (4, 1)), ((2, 5), (2, 3)), ((3, 7), (2, 5))])
def test_cell_sector_times_are_congruence_times(pq, times):
    # left cell returns after b, right cell after a
    fr = circle.first_return(R.rational(*pq), circle.cell_sector(*pq))
    rt = rotnum.return_times(*pq)
    assert fr.times == (rt.b, rt.a) == times[::-1]


@settings(max_examples=40, deadline=None)
@given(coprime_pairs(q_max=60))
def test_cell_sector_matches_return_times(pq):
    fr = circle.first_return(R.rational(*pq), circle.cell_sector(*pq))
    rt = rotnum.return_times(*pq)
    assert fr.times == (rt.b, rt.a)
    assert not fr.degenerate


def test_fundamental_first_return():
    fr = circle.first_return(R.rational(1, 5))
    assert fr.degenerate and fr.times == (5, 4)
    assert circle.first_return(R.rational(2, 5)).time_set == {2, 3}
    g = circle.first_return(rotnum.golden())
    assert g.time_set == {2, 3} and not g.degenerate
    # consecutive return times differ by one
    assert circle.first_return(rotnum.silver()).time_set == {2, 3}


@settings(max_examples=40, deadline=None)
@given(quadratics(n_max=5))
def test_fundamental_return_times_are_consecutive(x):
    fr = circle.first_return(x)
    a = rotnum.fast_step_count(x)
    assert fr.time_set == {a, a + 1}


def test_first_return_rejects_non_fundamental_sector():
    with pytest.raises(ValueError):
        circle.first_return(R.rational(1, 7), circle.Arc(Fraction(0), Fraction(1, 2)))


def test_induced_rotation_examples():
    g = circle.induced_rotation_number(rotnum.golden())
    assert g.conclusive and g.contains(float(rotnum.golden()))
    z = circle.induced_rotation_number(R.rational(1, 5), 50)
    assert z.estimate == 0
    s = circle.induced_rotation_number(rotnum.silver())
    assert s.contains(1 - float(rotnum.silver()))


@settings(max_examples=50, deadline=None)
@given(quadratics(n_max=5))
def test_induced_rotation_is_fast_renormalization(x):
    ind = circle.induced_rotation_number(x, 200)
    assert ind.contains(float(rotnum.fast_renormalize(x)))


def test_simplest_between():
    assert circle._simplest_between(Fraction(1, 3), Fraction(1, 2)) == Fraction(1, 2)
    assert circle._simplest_between(Fraction(3, 10), Fraction(7, 20)) == Fraction(1, 3)
    assert circle._simplest_between(Fraction(0), Fraction(1, 100)) == 0


def test_three_gaps_at_convergents():
    for st in circle.convergent_triangulations(rotnum.golden(), 10_000):
        assert st.distinct <= 3
    rat = circle.triangulation_stats(R.rational(2, 5), 2, 5)
    assert rat.distinct == 1 and rat.ratio == 1


def test_triangulation_bounds_pinned():
    g = max(s.ratio for s in circle.convergent_triangulations(rotnum.golden(), 10_000))
    s = max(s.ratio for s in circle.convergent_triangulations(rotnum.silver(), 10_000))
    assert g == pytest.approx(GOLDEN_TRIANGULATION_BOUND, rel=1e-6)
    assert s == pytest.approx(SILVER_TRIANGULATION_BOUND, rel=1e-6)
    assert g <= 2.62


def test_return_time_growth_golden():
    rows = circle.return_time_growth(rotnum.golden(), 20)
    assert [(r.a, r.b) for r in rows[:4]] == [(1, 2), (3, 2), (3, 5), (8, 5)]
    ea, eb = circle.growth_exponents(rows)
    phi = (1 + math.sqrt(5)) / 2
    assert ea == pytest.approx(math.log(phi), rel=1e-3)
    assert eb == pytest.approx(math.log(phi), rel=1e-3)


def test_return_time_growth_rejects_non_periodic():
    with pytest.raises(ValueError):
        circle.return_time_growth(R.quadratic((1, 2), (1,)), 5)
