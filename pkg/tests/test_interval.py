import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wazewski.geometry import CompactApprox
from wazewski.interval import (
    CapExceeded,
    NoSeparatingPoint,
    SearchExhausted,
    classify,
    cycle_net,
    delta_dense,
    dense_orbit_net,
    dense_orbit_search,
    eventual_period,
    interior_empty_demo,
    is_finite_omega_limit,
    is_periodic_orbit,
    separation_construct,
    separation_verify,
    tent,
    tent_orbit_values,
    tent_suite,
)

F = Fraction


@pytest.mark.parametrize("x, y", [(F(1, 2), F(1)), (F(2, 3), F(2, 3)), (F(2, 5), F(4, 5)), (F(0), F(0)), (F(1), F(0))])
def test_tent_values(x, y):
    assert tent(x) == y


def test_tent_domain():
    with pytest.raises(ValueError):
        tent(F(3, 2))


@pytest.mark.parametrize(
    "x, pre, per, cycle",
    [(F(2, 3), 0, 1, {F(2, 3)}), (F(2, 5), 0, 2, {F(2, 5), F(4, 5)}), (F(1, 3), 1, 1, {F(2, 3)})],
)
def test_eventual_period_examples(x, pre, per, cycle):
    o = eventual_period(x)
    assert (o.preperiod, o.period, set(o.cycle)) == (pre, per, cycle)


def test_eventual_period_cap():
    with pytest.raises(CapExceeded):
        eventual_period(F(1, 1_000_003), cap=100)


@given(st.integers(1, 10_000).flatmap(lambda q: st.tuples(st.integers(0, q), st.just(q))))
def test_eventual_periodicity_exact(pq):
    x = F(*pq)
    o = eventual_period(x)
    vals = tent_orbit_values(x, o.preperiod + o.period + 1)
    assert vals[-1] == vals[o.preperiod]
    assert o.period >= 1 and len(set(o.cycle)) == o.period
    assert is_finite_omega_limit(o.cycle)


@pytest.mark.parametrize("S, want", [({F(2, 3)}, True), ({F(2, 5), F(4, 5)}, True), ({F(1, 3)}, False)])
def test_periodic_orbit_fixtures(S, want):
    assert is_periodic_orbit(S) == want == is_finite_omega_limit(S)


def test_random_non_orbits_rejected():
    rng = random.Random(0)
    rejected = 0
    for _ in range(100):
        x = F(rng.randint(0, 50), 51)
        cyc = set(eventual_period(x).cycle)
        extra = F(rng.randint(0, 97), 97)
        if extra in cyc:
            continue
        assert not is_finite_omega_limit(cyc | {extra})
        rejected += 1
    assert rejected > 90


def test_interior_empty_examples():
    assert interior_empty_demo([F(2, 3)], F(1, 3))["passed"]
    rep = interior_empty_demo([F(2, 5), F(4, 5)], F(1, 2))
    assert rep["passed"] and "1/2" in rep["leaves_C"]
    with pytest.raises(ValueError):
        interior_empty_demo([F(2, 3)], F(2, 3))
    with pytest.raises(ValueError):
        interior_empty_demo([F(1, 3)], F(1, 2))


def test_dense_orbit_search():
    x = dense_orbit_search(F(1, 32), 10_000, 50, 1)
    assert delta_dense(tent_orbit_values(x, 10_000), F(1, 32))
    assert dense_orbit_search(F(1), 1, 1, 0) is not None
    with pytest.raises(SearchExhausted):
        dense_orbit_search(F(1, 8), 2, 20, 0)


def test_dense_orbit_search_respects_window():
    x = dense_orbit_search(F(1, 32), 10_000, 50, 2, F(3, 5), F(5, 8))
    assert F(3, 5) < x < F(5, 8)


def test_delta_dense():
    assert delta_dense([F(1, 4), F(3, 4)], F(1, 4))
    assert not delta_dense([F(1, 4), F(3, 4)], F(1, 5))


def _pt(*xs):
    return CompactApprox("s", tuple(xs), F(0))


def test_separation_fixed_point_from_two_cycle():
    A, B = _pt(F(2, 3)), _pt(F(2, 5), F(4, 5))
    sep = separation_construct(A, B, F(1, 16))
    assert sep.p == F(2, 3)
    r1, r2 = sep.cut_points
    assert F(2, 3) - F(1, 16) < r1 < F(2, 3) < r2 < F(2, 3) + F(1, 16)
    assert sep.selected == (0, 1)
    assert sep.density["cut_points_dense"]
    assert classify(sep, A) == "V" and classify(sep, B) == "U"


def test_separation_full_interval_from_fixed_point():
    A = dense_orbit_net(F(1, 32), 10_000, 3)
    B = _pt(F(2, 3))
    sep = separation_construct(A, B, F(1, 16))
    assert abs(sep.p - F(2, 3)) > F(1, 8)
    # the dense net contains points next to every cut point
    assert classify(sep, A) == "margin"
    assert classify(sep, B) == "U"


def test_separation_requires_distinct_far_sets():
    with pytest.raises(NoSeparatingPoint):
        separation_construct(_pt(F(2, 3)), _pt(F(2, 3)), F(1, 16))
    with pytest.raises(NoSeparatingPoint):
        separation_construct(_pt(F(2, 3)), _pt(F(3, 5)), F(1, 16))


def test_separation_verify_samples():
    sep = separation_construct(_pt(F(2, 3)), _pt(F(2, 5), F(4, 5)), F(1, 16))
    rng = random.Random(9)
    samples = [cycle_net(F(rng.randint(0, 30), 31)) for _ in range(20)]
    rep = separation_verify(sep, samples)
    assert sum(rep["counts"].values()) == 20
    assert rep["outside_margin_fraction"] >= 0.95
    for s in samples:
        label = classify(sep, s)
        if label != "margin":
            assert sep.in_U(s.points) != sep.in_V(s.points)


def test_tent_suite_clean():
    rep = tent_suite(1)
    assert rep["failures"] == []
