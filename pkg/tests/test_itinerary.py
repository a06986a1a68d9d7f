from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import finite_itineraries, points
from wazewski.dyadics import Dyadic, gamma_cap_kth
from wazewski.itinerary import (
    ORIGIN,
    Finite,
    GammaTail,
    ItineraryParseError,
    Lazy,
    Origin,
    apply_f,
    finite,
    increment_head,
    iterate_f,
    origin_time_bound,
    pair_at,
    parse_itinerary,
    return_times,
    rule_for,
    special_point,
    time_to_origin,
    truncate,
)

H = Fraction(1, 2)


@pytest.mark.parametrize(
    "src, dst",
    [
        ("(3,3/10)", "(2,3/10)"),
        ("(0,3/8,2,1/2)", "(5,1/2)"),
        ("(0)", "(0)"),
        ("(0,7/10)", "(0)"),
        ("(0,1/4,3,1/2,1,1)", "(5,1/2,1,1)"),
    ],
)
def test_apply_f_examples(src, dst):
    assert str(apply_f(parse_itinerary(src))) == dst


def test_iterate_examples():
    assert iterate_f(finite(3, Fraction(1, 3)), 3) == finite(0, Fraction(1, 3))
    assert iterate_f(special_point(Fraction(1)), 2) == Lazy((), 0, GammaTail(Fraction(1), 2))
    x = finite(0, H, 4, Fraction(2, 3))
    assert iterate_f(x, 0) == x


def test_time_to_origin_examples():
    assert time_to_origin(ORIGIN) == 0
    assert time_to_origin(finite(6, Fraction(1, 5))) == 7
    # R3 -> (3, r), three decrements, then collapse
    assert time_to_origin(finite(0, H, 2, Fraction(1, 3))) == 5


def test_time_to_origin_rejects_lazy():
    with pytest.raises(ValueError):
        time_to_origin(special_point(H))


@pytest.mark.parametrize(
    "r, tail",
    [
        (Fraction(1), ["1/2", "1/4", "3/4", "1/8"]),
        (Fraction(1, 2), ["1/2", "1/4", "1/8", "3/8"]),
        (Fraction(1, 4), ["1/4", "1/8", "1/16", "3/16"]),
    ],
)
def test_special_point_tail(r, tail):
    x = special_point(r)
    assert [str(x.tail.dyadic(k)) for k in range(4)] == tail


def test_special_point_rejects():
    for r in (Fraction(0), Fraction(5, 4)):
        with pytest.raises(ValueError):
            special_point(r)


def test_return_times_examples():
    assert return_times(Fraction(1), 4) == [2, 5, 8]
    assert return_times(H, 3) == [2, 5]
    assert return_times(Fraction(1, 3), 2) == [gamma_cap_kth(Fraction(1, 3), 1).l + 1]


@pytest.mark.parametrize("r", [H, Fraction(1), Fraction(2, 3)])
def test_return_time_recurrence(r):
    m = [0] + return_times(r, 301)
    assert all(m[k] - m[k - 1] == gamma_cap_kth(r, k).l + 1 for k in range(1, 301))


def test_lazy_orbit_never_reaches_origin():
    it = special_point(Fraction(3, 4))
    for _ in range(10_000):
        it = apply_f(it)
        assert not isinstance(it, Origin)


@given(points())
def test_exactly_one_rule(x):
    rule = rule_for(x)
    conditions = {
        "R0": isinstance(x, Origin),
        "R1": not isinstance(x, Origin) and (x.steps[0][0] if x.steps else x.terminal_branch) >= 1,
        "R2": isinstance(x, Finite) and not x.steps and x.terminal_branch == 0,
        "R3": isinstance(x, Finite) and bool(x.steps) and x.steps[0][0] == 0,
    }
    assert [k for k, v in conditions.items() if v] == [rule]


@given(finite_itineraries())
def test_r1_is_a_bijection_onto_its_image(x):
    assert apply_f(increment_head(x)) == x
    if rule_for(x) == "R1":
        assert increment_head(apply_f(x)) == x


@given(finite_itineraries(max_depth=6, max_branch=20, max_level=6))
def test_time_to_origin_equals_closed_form(x):
    n = time_to_origin(x)
    assert n == origin_time_bound(x)
    assert iterate_f(x, n) == ORIGIN
    assert n == 0 or iterate_f(x, n - 1) != ORIGIN


@given(points())
def test_apply_f_deterministic(x):
    y = parse_itinerary(str(x))
    assert y == x and apply_f(y) == apply_f(x)


@given(finite_itineraries())
def test_parse_round_trip(x):
    assert parse_itinerary(str(x)) == x


@settings(max_examples=30)
@given(st.sampled_from([Fraction(1), H, Fraction(1, 4), Fraction(5, 7)]), st.integers(0, 60))
def test_lazy_round_trip(r, n):
    x = iterate_f(special_point(r), n)
    assert parse_itinerary(str(x)) == x


def test_lazy_text_form():
    assert str(special_point(Fraction(1))) == "(0,*gamma[1,1])"
    assert parse_itinerary("(2,1/4,3,*gamma[1/2,5])") == Lazy(((2, Dyadic(1, 2)),), 3, GammaTail(H, 5))


@pytest.mark.parametrize("text, pos", [("(0,3/8", 0), ("(1,2/3,1,1)", 3), ("(x,1/2)", 1), ("(0,1/2,2,3/2)", 9), ("(a)", 2)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ItineraryParseError) as info:
        parse_itinerary(text)
    assert info.value.position == pos


def test_pair_at_and_truncate():
    x = special_point(H)
    assert pair_at(x, 0) == (0, H, False)
    assert pair_at(x, 2) == (0, Fraction(1, 8), False)
    assert truncate(x, 2) == finite(0, H, 0, Fraction(1, 4))
    y = finite(1, H, 2, Fraction(1, 3))
    assert pair_at(y, 1) == (2, Fraction(1, 3), True)


def test_finite_validation():
    with pytest.raises(ValueError):
        finite(0, Fraction(0))
    with pytest.raises(ValueError):
        finite(-1, H)
    with pytest.raises(ValueError):
        finite(0, Fraction(1, 3), 1, H)
