from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import dyadics
from wazewski.dyadics import (
    Dyadic,
    dyadic_to_index,
    gamma,
    gamma_cap,
    gamma_cap_kth,
    grid_points,
    index_to_dyadic,
    is_dyadic,
    omega_of_sequence_approx,
)


def _filter_oracle(r: Fraction, k: int) -> Fraction:
    """k-th dyadic <= r in enumeration order, by scanning the enumeration."""
    seen = 0
    for a in gamma():
        if a.value <= r:
            seen += 1
            if seen == k:
                return a.value


@pytest.mark.parametrize("n, value", [(1, Fraction(1, 2)), (3, Fraction(3, 4)), (8, Fraction(1, 16))])
def test_index_to_dyadic_listed_elements(n, value):
    assert index_to_dyadic(n).value == value


@pytest.mark.parametrize("value, n", [(Fraction(1, 2), 1), (Fraction(7, 8), 7), (Fraction(3, 8), 5)])
def test_dyadic_to_index(value, n):
    assert dyadic_to_index(Dyadic.from_fraction(value)) == n


def test_round_trip_first_hundred_thousand():
    assert all(dyadic_to_index(index_to_dyadic(n)) == n for n in range(1, 100_001))


def test_levels_listed_in_blocks():
    levels = [index_to_dyadic(n).l for n in range(1, 5000)]
    assert levels == sorted(levels)
    assert levels.count(5) == 16


@given(dyadics(12))
def test_round_trip_from_dyadic(a):
    assert index_to_dyadic(dyadic_to_index(a)) == a


@pytest.mark.parametrize(
    "r, k, value",
    [(Fraction(1), 3, Fraction(3, 4)), (Fraction(1, 2), 2, Fraction(1, 4)), (Fraction(1, 2), 4, Fraction(3, 8))],
)
def test_gamma_cap_examples(r, k, value):
    assert gamma_cap_kth(r, k).value == value


@given(st.integers(1, 64).flatmap(lambda q: st.tuples(st.integers(1, q), st.just(q))), st.integers(1, 60))
def test_gamma_cap_matches_filter(pq, k):
    r = Fraction(*pq)
    b = gamma_cap_kth(r, k)
    assert b.value <= r
    assert b.value == _filter_oracle(r, k)


def test_gamma_cap_keeps_enumeration_order():
    r = Fraction(5, 7)
    idx = [dyadic_to_index(gamma_cap_kth(r, k)) for k in range(1, 300)]
    assert idx == sorted(idx)


def test_gamma_cap_r1_is_full_enumeration():
    assert [gamma_cap_kth(Fraction(1), k) for k in range(1, 200)] == [index_to_dyadic(n) for n in range(1, 200)]


def test_gamma_cap_includes_dyadic_endpoint():
    assert gamma_cap_kth(Fraction(1, 2), 1).value == Fraction(1, 2)


@pytest.mark.parametrize("r", [Fraction(0), Fraction(3, 2), Fraction(-1, 4)])
def test_gamma_cap_rejects_r_outside(r):
    with pytest.raises(ValueError):
        gamma_cap_kth(r, 1)


@pytest.mark.parametrize("p, l", [(2, 3), (0, 1), (9, 3), (1, 0)])
def test_dyadic_validation(p, l):
    with pytest.raises(ValueError):
        Dyadic(p, l)


def test_is_dyadic():
    assert is_dyadic(Fraction(3, 8))
    assert not is_dyadic(Fraction(1, 3))
    assert not is_dyadic(Fraction(1))


def test_sequence_limits_full_enumeration():
    om = omega_of_sequence_approx(gamma(), 4096, Fraction(1, 64))
    assert set(om.hit_grid) == set(grid_points(Fraction(1, 64)))


def test_sequence_limits_constant():
    om = omega_of_sequence_approx(iter([Fraction(1, 2)] * 100), 100, Fraction(1, 64))
    assert om.marked_sorted() == [Fraction(31, 64), Fraction(1, 2), Fraction(33, 64)]


@pytest.mark.parametrize("r", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)])
def test_sequence_limits_capped(r):
    step = Fraction(1, 64)
    om = omega_of_sequence_approx(gamma_cap(r), 4096, step)
    # r + step is within one step only of the single term r, so it is not marked
    assert om.marked_sorted() == [g for g in grid_points(step) if g <= r]


@pytest.mark.parametrize("step", [Fraction(1), Fraction(0), Fraction(3, 2)])
def test_sequence_limits_rejects_grid(step):
    with pytest.raises(ValueError):
        omega_of_sequence_approx(gamma(), 10, step)


@pytest.mark.parametrize("r", [Fraction(1, 4), Fraction(5, 7), Fraction(1)])
def test_gamma_cap_generator_matches_closed_form(r):
    import itertools

    assert list(itertools.islice(gamma_cap(r), 2000)) == [gamma_cap_kth(r, k) for k in range(1, 2001)]
