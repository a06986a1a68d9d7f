import math
import random
import xml.dom.minidom
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import dyadics, finite_itineraries, params, points
from wazewski.dyadics import Dyadic
from wazewski.geometry import (
    Scene,
    TreeIndex,
    base_angle,
    base_length,
    beam_length,
    build_net_D_truncated,
    build_net_Dr,
    chain_distance,
    embedding_disjointness_check,
    intrinsic_distance,
    realize_planar,
    render_svg,
    resolve,
    star_scale,
    subtree_diameter_bound,
    subtree_radius_bound,
)
from wazewski.itinerary import ORIGIN, Finite, finite, iterate_f, special_point
from wazewski.dynamics import orbit

H = Fraction(1, 2)
D1 = Dyadic(1, 1)


def test_beam_length_examples():
    assert beam_length([], 0) == 1
    assert beam_length([], 3) == Fraction(1, 4)
    assert beam_length([(0, D1)], 0) == Fraction(1, 8)


def test_diameter_bound_examples():
    assert subtree_diameter_bound([], 0) == 4
    assert subtree_diameter_bound([(0, D1)], 0) == Fraction(1, 2)
    assert subtree_diameter_bound([(0, D1)] * 3, 0) == 4 * Fraction(1, 2**9)


def test_scheme_invariants():
    assert [base_length(j) for j in range(5)] == [1, 1, H, Fraction(1, 4), Fraction(1, 8)]
    slopes = [math.tan(base_angle(j)) for j in range(2, 30)]
    assert all(a > b > 0 for a, b in zip(slopes, slopes[1:]))
    for l in range(1, 10):
        for lam in (Fraction(1), Fraction(1, 8)):
            gap = lam * Fraction(1, 2**l)
            assert star_scale(l, lam) < gap / 2
            # subtrees hanging at the two ends of a gap stay apart
            assert subtree_radius_bound(star_scale(l, lam)) * 2 < gap


def test_diameter_bound_shrinks():
    by_level = [subtree_diameter_bound([(0, Dyadic(1, l))], 0) for l in range(1, 12)]
    by_branch = [subtree_diameter_bound([], n) for n in range(1, 25)]
    assert all(a > b for a, b in zip(by_level, by_level[1:]))
    assert all(a >= b for a, b in zip(by_branch, by_branch[1:]))
    assert by_level[-1] < Fraction(1, 1000) and by_branch[-1] < Fraction(1, 1000)


def test_radius_bound_truncated():
    assert subtree_radius_bound(Fraction(1)) == Fraction(8, 7)
    assert subtree_radius_bound(Fraction(1), 1) == 1


@pytest.mark.parametrize(
    "a, b, d",
    [
        (finite(0, H), finite(0, 1), H),
        (finite(2, 1), finite(3, 1), Fraction(3, 4)),
        (finite(0, H), finite(0, H, 0, 1), Fraction(1, 8)),
        (finite(5, Fraction(1, 3)), finite(5, Fraction(1, 3)), 0),
    ],
)
def test_distance_examples(a, b, d):
    assert intrinsic_distance(a, b) == d


def test_beam_endpoints():
    for j in range(21):
        assert intrinsic_distance(ORIGIN, finite(j, 1)) == base_length(j)


@given(points(), points(), points())
def test_metric_axioms(x, y, z):
    dxy = intrinsic_distance(x, y)
    assert dxy == intrinsic_distance(y, x)
    assert (dxy == 0) == (x == y)
    assert intrinsic_distance(x, z) <= dxy + intrinsic_distance(y, z)


def test_lazy_distance_within_tolerance():
    x = iterate_f(special_point(Fraction(3, 4)), 17)
    y = finite(1, Fraction(1, 4), 2, Fraction(2, 3))
    fine = intrinsic_distance(x, y, Fraction(1, 2**40))
    for k in range(2, 16):
        tol = Fraction(1, 2**k)
        assert abs(intrinsic_distance(x, y, tol) - fine) <= tol


@settings(max_examples=50)
@given(st.lists(finite_itineraries(), min_size=1, max_size=25), finite_itineraries())
def test_tree_index_matches_bruteforce(stored, query):
    chains = [resolve(p) for p in stored]
    q = resolve(query)
    assert TreeIndex(chains).nearest_distance(q) == min(chain_distance(q, c) for c in chains)


def test_truncated_net_examples():
    net = build_net_D_truncated(1, 2, 0, Fraction(1, 4))
    assert len(net.points) == 11 and net.resolution == H
    net = build_net_D_truncated(1, 20, 0, Fraction(1, 64))
    assert net.resolution - Fraction(1, 64) <= 4 * Fraction(1, 2**19)
    assert build_net_D_truncated(1, 2, 0, Fraction(2)).points == (ORIGIN,)


def test_truncated_net_rejects_useless():
    with pytest.raises(ValueError):
        build_net_D_truncated(1, 0, 0, Fraction(1, 2))


def _random_point_in(rng, depth, branch_max=30, level_max=10):
    flat = []
    for _ in range(rng.randint(0, depth - 1)):
        l = rng.randint(1, level_max)
        flat += [rng.randint(0, branch_max), Fraction(2 * rng.randrange(1 << (l - 1)) + 1, 1 << l)]
    q = rng.randint(1, 200)
    return finite(*flat, rng.randint(0, branch_max), Fraction(rng.randint(1, q), q))


@pytest.mark.parametrize("d, J, Lmax, eps", [(1, 6, 0, Fraction(1, 8)), (2, 4, 2, Fraction(1, 4)), (2, 6, 3, Fraction(1, 16))])
def test_truncated_net_certified(d, J, Lmax, eps):
    net = build_net_D_truncated(d, J, Lmax, eps)
    index = TreeIndex([resolve(p) for p in net.points])
    rng = random.Random(d * 100 + J)
    for _ in range(300):
        x = _random_point_in(rng, d)
        assert index.nearest_distance(resolve(x)) <= net.resolution


def test_dr_net_examples():
    zero = build_net_Dr(Fraction(0), Fraction(1, 64), 4)
    assert zero.points == (ORIGIN,) and zero.resolution == 0
    half = build_net_Dr(H, Fraction(1, 4), 3)
    assert finite(0, H) in half.points
    full = build_net_Dr(Fraction(1), Fraction(1, 64), 20)
    assert all(finite(j, 1) in full.points for j in range(21))


@pytest.mark.parametrize("r", [Fraction(1, 4), Fraction(2, 3), Fraction(1)])
def test_dr_net_certified(r):
    net = build_net_Dr(r, Fraction(1, 32), 10)
    rng = random.Random(5)
    for _ in range(300):
        t = r * Fraction(rng.randint(1, 500), 500)
        x = finite(rng.randint(0, 40), t)
        assert min(intrinsic_distance(x, p) for p in net.points) <= net.resolution


def test_net_json():
    js = build_net_Dr(H, Fraction(1, 2), 1).to_json()
    assert js["resolution"] == "3/4"
    assert js["points"][0] == "(0)"


def test_planar_examples():
    assert realize_planar(ORIGIN) == realize_planar(ORIGIN)
    o, b0, b1 = realize_planar(ORIGIN), realize_planar(finite(0, 1)), realize_planar(finite(1, H))
    assert (o.x, o.y) == (0.0, 0.0)
    assert b0.x == pytest.approx(-1) and b0.y == pytest.approx(0, abs=1e-12)
    assert b1.x == pytest.approx(0, abs=1e-12) and b1.y == pytest.approx(0.5)


@given(points(max_depth=3), points(max_depth=3))
def test_euclidean_at_most_intrinsic(x, y):
    a, b = realize_planar(x), realize_planar(y)
    assert math.hypot(a.x - b.x, a.y - b.y) <= float(intrinsic_distance(x, y)) + 1e-12


@pytest.mark.parametrize("d, J, Lmax", [(1, 6, 0), (2, 4, 2), (1, 0, 0), (2, 6, 2)])
def test_embedding_disjoint(d, J, Lmax):
    rep = embedding_disjointness_check(d, J, Lmax)
    assert rep["passed"], rep["offending"]
    assert rep["min_gap"] is None or rep["min_gap"] > 0


def test_render_empty():
    svg = render_svg(Scene())
    doc = xml.dom.minidom.parseString(svg)
    assert doc.documentElement.getAttribute("viewBox") == "-1.1 -1.1 2.2 2.2"


def test_render_net_one_chain_per_beam():
    J = 5
    svg = render_svg(Scene((build_net_D_truncated(1, J, 0, Fraction(1, 4)),)))
    assert svg.count("<polyline") == J + 1


def test_render_orbit_markers_and_determinism():
    orb = tuple(orbit(special_point(Fraction(1)), 50))
    scene = Scene((build_net_Dr(Fraction(1), Fraction(1, 8), 6),), (orb,))
    a, b = render_svg(scene), render_svg(scene)
    assert a == b
    assert a.count("<circle") == 50
    xml.dom.minidom.parseString(a)
