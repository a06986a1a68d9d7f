import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wazewski.dyadics import Dyadic
from wazewski.dynamics import (
    Cylinder,
    _build_z,
    connecting_point,
    consumption_base,
    mixing_threshold,
    mixing_window,
    omega_approx,
    omega_report,
    orbit,
    parse_cylinder,
    random_cylinder,
    sample_omega_hyperspace,
    shift_invariance_defect,
    transitivity_batch,
    verify_omega_equals_Dr,
)
from wazewski.itinerary import ORIGIN, GammaTail, Lazy, finite, iterate_f, special_point, time_to_origin

H = Fraction(1, 2)
R = Fraction(2, 7)


def test_orbit_examples():
    assert orbit(ORIGIN, 5) == [ORIGIN] * 5
    assert orbit(finite(2, R), 4) == [finite(2, R), finite(1, R), finite(0, R), ORIGIN]
    one = Fraction(1)
    assert orbit(special_point(one), 3) == [
        Lazy((), 0, GammaTail(one, 1)),
        Lazy((), 1, GammaTail(one, 2)),
        Lazy((), 0, GammaTail(one, 2)),
    ]


def test_omega_of_eventually_fixed_points():
    x = finite(3, Fraction(1, 4), 2, R)
    assert omega_approx(x, time_to_origin(x) + 1, 10).points.points == (ORIGIN,)
    assert omega_approx(ORIGIN, 0, 10).points.points == (ORIGIN,)


def test_omega_of_special_point_near_fan():
    rep = omega_report(Fraction(1), 1000, 10_000)
    assert rep["residual"] <= Fraction(1, 16)
    assert rep["residual"] == max(rep["tail_to_Dr"], rep["Dr_to_tail"])


def test_degenerate_run_does_not_cover_fan():
    assert verify_omega_equals_Dr(Fraction(1), skip=0, length=1) >= H


def test_verify_rejects_r_zero():
    with pytest.raises(ValueError):
        verify_omega_equals_Dr(Fraction(0))


def test_shift_invariance():
    for r in (Fraction(1, 3), Fraction(1)):
        assert shift_invariance_defect(omega_approx(special_point(r), 50, 400)) == 0


def test_connecting_point_examples():
    B1 = Cylinder((), 1, Fraction(1, 4), Fraction(3, 4))
    w = connecting_point(B1, B1)
    assert w.verified and w.n >= 1
    U, V = Cylinder((), 0, Fraction(0), Fraction(1)), Cylinder((), 5, Fraction(1, 4), H)
    assert connecting_point(U, V).verified
    whole = Cylinder((), 2, Fraction(0), Fraction(1))
    # (2, 1/2, 2, 1/2): two decrements, one collapse through level 1
    assert connecting_point(whole, whole).n == consumption_base(whole) + 1


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_witnesses_pass_independent_check(seed):
    rng = random.Random(seed)
    U, V = random_cylinder(rng), random_cylinder(rng)
    w = connecting_point(U, V)
    assert U.contains(w.z) and V.contains(iterate_f(w.z, w.n))
    rep = mixing_window(U, V, mixing_threshold(U), 6)
    assert not rep.unreachable
    for wi, n in zip(rep.witnesses, range(rep.threshold, rep.threshold + 6)):
        assert wi.n == n and U.contains(wi.z) and V.contains(iterate_f(wi.z, n))


def test_mixing_window_ten():
    U = Cylinder(((3, Dyadic(3, 4)),), 2, Fraction(1, 3), Fraction(2, 5))
    V = Cylinder((), 4, Fraction(1, 8), Fraction(1, 4))
    rep = mixing_window(U, V, mixing_threshold(U), 10)
    assert len(rep.witnesses) == 10 and rep.all_verified and not rep.unreachable


def test_mixing_reports_unreachable_times():
    U = Cylinder(((4, Dyadic(1, 1)),), 3, Fraction(0), Fraction(1))
    V = Cylinder((), 0, Fraction(0), Fraction(1))
    rep = mixing_window(U, V, 1, 5)
    assert rep.unreachable == [1, 2, 3, 4, 5]
    assert rep.to_json()["unreachable"] == [1, 2, 3, 4, 5]


def test_level_bump_adds_one_step():
    U = Cylinder((), 1, Fraction(0), Fraction(1))
    V = Cylinder((), 3, Fraction(0), Fraction(1))
    z_half = _build_z(U, Dyadic(1, 1), 0, V)
    z_quarter = _build_z(U, Dyadic(1, 2), 0, V)
    tgt = finite(3, H)

    def hit(z):
        return next(n for n in range(100) if iterate_f(z, n) == tgt)

    assert hit(z_quarter) == hit(z_half) + 1


def test_mixing_threshold_is_tight():
    U = Cylinder((), 1, Fraction(1, 3), Fraction(3, 8))
    V = Cylinder((), 0, Fraction(0), Fraction(1))
    t = mixing_threshold(U)
    assert not mixing_window(U, V, t, 20).unreachable
    assert mixing_window(U, V, t - 1, 1).unreachable == [t - 1]


def test_batch():
    rep = transitivity_batch(10, 2, window=5)
    assert rep["failures"] == [] and len(rep["results"]) == 10


def test_parse_cylinder_round_trip():
    rng = random.Random(4)
    for _ in range(50):
        c = random_cylinder(rng)
        assert parse_cylinder(str(c)) == c
    with pytest.raises(ValueError):
        parse_cylinder("[1,1/2,(0,1)]")


def test_sample_hyperspace():
    fin = sample_omega_hyperspace([finite(1, H), finite(0, H, 3, R)], 10, 20)
    assert fin.matrix == ((0, 0), (0, 0))
    one = sample_omega_hyperspace([special_point(H)], 10, 20)
    assert one.matrix == ((0,),)
    rs = [Fraction(1, 4), H, Fraction(3, 4), Fraction(1)]
    arc = sample_omega_hyperspace([special_point(r) for r in rs], 500, 6000, Fraction(1, 256))
    for i, r in enumerate(rs):
        for j, s in enumerate(rs):
            assert abs(arc.matrix[i][j] - abs(r - s)) <= Fraction(1, 16)
