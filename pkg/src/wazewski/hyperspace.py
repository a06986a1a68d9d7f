"""Hausdorff distance between nets, Vietoris basis sets, and exhaustive
finite checks of the closure lemma for Vietoris sets.

Two kinds of ground space show up in the finite checks:

* ``FiniteMetricSpace``: a finite point set with an exact distance matrix.
  Subsets are enumerated outright, so closures in 2^X are computed from
  their definition.  Such spaces are discrete, which makes every Vietoris
  set closed; the check is exhaustive but never meets a boundary point.
* ``IntervalSpace``: the unit interval, with open sets given as finite
  unions of rational open intervals and compact sets as finite rational
  sets.  Here boundaries of Vietoris sets are non-empty, and membership in
  the closure is decided by explicitly building near-by members of the
  Vietoris set (see ``IntervalSpace.in_hyperspace_closure``).
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .geometry import CompactApprox, TreeIndex, build_net_Dr, resolve
from .itinerary import Finite, Lazy, Origin

MAX_ENUMERATION = 12

# ---------------------------------------------------------------------------
# Hausdorff distance


def _kind(points) -> str:
    kinds = set()
    for p in points:
        if isinstance(p, (Origin, Finite, Lazy)):
            kinds.add("dendrite")
        elif isinstance(p, (Fraction, int)):
            kinds.add("interval")
        else:
            kinds.add(type(p).__name__)
    if len(kinds) != 1:
        raise TypeError(f"net mixes point kinds {sorted(kinds)}")
    return kinds.pop()


def _directed_interval(A: Sequence[Fraction], B_sorted: list[Fraction]) -> Fraction:
    worst = Fraction(0)
    for a in A:
        i = bisect.bisect_left(B_sorted, a)
        best = None
        if i < len(B_sorted):
            best = B_sorted[i] - a
        if i > 0:
            v = a - B_sorted[i - 1]
            best = v if best is None or v < best else best
        if best > worst:
            worst = best
    return worst


def hausdorff_bruteforce(A: Sequence, B: Sequence, dist: Callable) -> Fraction:
    """max(sup_a d(a, B), sup_b d(b, A)) by the double loop."""
    if not A or not B:
        raise ValueError("Hausdorff distance needs non-empty sets")
    ab = max(min(dist(a, b) for b in B) for a in A)
    ba = max(min(dist(a, b) for a in A) for b in B)
    return max(ab, ba)


def hausdorff_points(A: Sequence, B: Sequence, metric="auto", tol: Fraction = Fraction(1, 1024)) -> Fraction:
    """Hausdorff distance between two finite point sets.

    ``metric`` is "auto" (chosen from the point kind), "intrinsic", "interval",
    or a callable d(a, b) evaluated by brute force.  Infinite itineraries are
    truncated within tol / 2 each, so the intrinsic value is within tol of the
    value for the untruncated points.
    """
    if not A or not B:
        raise ValueError("Hausdorff distance needs non-empty sets")
    if callable(metric):
        return hausdorff_bruteforce(A, B, metric)
    ka, kb = _kind(A), _kind(B)
    if ka != kb:
        raise TypeError(f"nets live in different spaces ({ka} vs {kb})")
    if metric == "auto":
        metric = "intrinsic" if ka == "dendrite" else "interval"
    if metric == "interval":
        if ka != "interval":
            raise TypeError("interval metric needs rational points")
        A = [Fraction(a) for a in A]
        B = [Fraction(b) for b in B]
        return max(_directed_interval(A, sorted(B)), _directed_interval(B, sorted(A)))
    if metric == "intrinsic":
        if ka != "dendrite":
            raise TypeError("intrinsic metric needs itineraries")
        half = Fraction(tol) / 2
        ca = [resolve(p, half) for p in A]
        cb = [resolve(p, half) for p in B]
        return max(directed_tree(ca, cb), directed_tree(cb, ca))
    raise ValueError(f"unknown metric {metric!r}")


def directed_tree(A_chains, B_chains) -> Fraction:
    """sup over A of the exact tree distance to B."""
    index = TreeIndex(B_chains)
    return max(index.nearest_distance(c) for c in A_chains)


def hausdorff(A: CompactApprox, B: CompactApprox, metric="auto", tol: Fraction = Fraction(1, 1024)) -> Fraction:
    """Hausdorff distance between two nets.

    The true distance between the sets the nets stand for is within
    ``hausdorff_error(A, B, tol)`` of the returned value.
    """
    return hausdorff_points(A.points, B.points, metric, tol)


def hausdorff_error(A: CompactApprox, B: CompactApprox, tol: Fraction = Fraction(0)) -> Fraction:
    return Fraction(A.resolution) + Fraction(B.resolution) + Fraction(tol)


# ---------------------------------------------------------------------------
# Vietoris sets


@dataclass(frozen=True)
class VietorisNbhd:
    """<U_1, ..., U_n>: sets inside the union of the U_i meeting every U_i.

    Members only need ``__contains__``: Python sets for finite spaces,
    ``OpenSet`` for the interval.
    """

    members: tuple

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("a Vietoris set needs at least one member")
        for U in self.members:
            if isinstance(U, (set, frozenset)) and not U:
                raise ValueError("Vietoris members must be non-empty")
            if isinstance(U, OpenSet) and U.is_empty():
                raise ValueError("Vietoris members must be non-empty")


def vietoris_contains(K: Iterable, N: VietorisNbhd) -> bool:
    K = list(K)
    if not K:
        raise ValueError("K must be non-empty")
    inside = all(any(x in U for U in N.members) for x in K)
    return inside and all(any(x in U for x in K) for U in N.members)


# ---------------------------------------------------------------------------
# finite metric spaces


@dataclass(frozen=True)
class FiniteMetricSpace:
    labels: tuple
    dist: tuple  # tuple of tuples of Fraction

    def __post_init__(self) -> None:
        n = len(self.labels)
        if n == 0 or len(self.dist) != n or any(len(row) != n for row in self.dist):
            raise ValueError("distance matrix shape does not match labels")
        for i in range(n):
            if self.dist[i][i] != 0:
                raise ValueError("nonzero diagonal")
            for j in range(n):
                if self.dist[i][j] != self.dist[j][i]:
                    raise ValueError("asymmetric distances")
                if i != j and self.dist[i][j] <= 0:
                    raise ValueError("distinct points at distance zero")
                for k in range(n):
                    if self.dist[i][k] > self.dist[i][j] + self.dist[j][k]:
                        raise ValueError(f"triangle inequality fails at {i},{j},{k}")

    def __len__(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def closure(self, U: frozenset) -> frozenset:
        """Points at distance zero from U."""
        return frozenset(x for x in range(len(self)) if min(self.d(x, u) for u in U) == 0)

    def hausdorff(self, A: frozenset, B: frozenset) -> Fraction:
        return hausdorff_bruteforce(sorted(A), sorted(B), self.d)


def path_space(n: int) -> FiniteMetricSpace:
    """n points on a line at unit spacing."""
    return FiniteMetricSpace(
        tuple(range(n)),
        tuple(tuple(Fraction(abs(i - j)) for j in range(n)) for i in range(n)),
    )


def random_finite_metric_space(n: int, rng: random.Random) -> FiniteMetricSpace:
    """Shortest-path metric of a complete graph with random integer weights."""
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = Fraction(rng.randint(1, 9))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return FiniteMetricSpace(tuple(range(n)), tuple(tuple(r) for r in w))


def ball(X: FiniteMetricSpace, center: int, radius: Fraction) -> frozenset:
    """Open ball {x : d(x, center) < radius}."""
    return frozenset(x for x in range(len(X)) if X.d(x, center) < radius)


def all_nonempty_subsets(n: int):
    for mask in range(1, 1 << n):
        yield frozenset(i for i in range(n) if mask >> i & 1)


def vietoris_closure_bruteforce(X: FiniteMetricSpace, Us: Sequence[Iterable]) -> dict:
    """Compare cl<U_1..U_n> with <cl U_1..cl U_n> over every non-empty subset of X.

    The left side is taken from the definition: K is in the closure when its
    Hausdorff distance to the members of <U> has infimum zero.
    """
    if len(X) > MAX_ENUMERATION:
        raise ValueError(f"enumeration capped at {MAX_ENUMERATION} points, got {len(X)}")
    Us = [frozenset(U) for U in Us]
    N = VietorisNbhd(tuple(Us))
    Ncl = VietorisNbhd(tuple(X.closure(U) for U in Us))
    subsets = list(all_nonempty_subsets(len(X)))
    members = [K for K in subsets if vietoris_contains(K, N)]
    mismatches = []
    boundary = []
    for K in subsets:
        in_cl = bool(members) and min(X.hausdorff(K, A) for A in members) == 0
        in_rhs = vietoris_contains(K, Ncl)
        if in_cl != in_rhs:
            mismatches.append(sorted(K))
        if in_cl and K not in members:
            boundary.append(sorted(K))
    return {
        "lemma": "vietoris-closure",
        "space_size": len(X),
        "subsets": len(subsets),
        "members": len(members),
        "boundary": boundary,
        "equal": not mismatches,
        "counterexamples": mismatches[:5],
    }


# ---------------------------------------------------------------------------
# the unit interval


@dataclass(frozen=True)
class OpenSet:
    """Finite union of open intervals (lo, hi), read relative to [0, 1].

    An interval with lo < 0 contains 0 and one with hi > 1 contains 1.
    """

    intervals: tuple

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "intervals", tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.intervals)
        )
        for lo, hi in self.intervals:
            if not lo < hi:
                raise ValueError(f"empty interval ({lo}, {hi})")

    def __contains__(self, x) -> bool:
        return 0 <= x <= 1 and any(lo < x < hi for lo, hi in self.intervals)

    def closure_contains(self, x) -> bool:
        return 0 <= x <= 1 and any(
            max(lo, 0) <= x <= min(hi, 1) for lo, hi in self.intervals if lo < 1 and hi > 0
        )

    def is_empty(self) -> bool:
        return all(hi <= 0 or lo >= 1 for lo, hi in self.intervals)

    def endpoints(self) -> list[Fraction]:
        return [e for iv in self.intervals for e in iv]

    def point_near(self, x: Fraction, eta: Fraction) -> Fraction | None:
        """Some point of the set strictly within eta of x, if any."""
        best = None
        for lo, hi in self.intervals:
            a, b = max(lo, Fraction(0)), min(hi, Fraction(1))
            if a > b:
                continue
            if lo < x < hi and 0 <= x <= 1:
                return x
            # nearest inside point, nudged into the open part
            if x <= a:
                cand = a if a == 0 and lo < 0 else a + min(eta / 2, (b - a) / 2)
            else:
                cand = b if b == 1 and hi > 1 else b - min(eta / 2, (b - a) / 2)
            if cand in self and abs(cand - x) < eta:
                if best is None or abs(cand - x) < abs(best - x):
                    best = cand
        return best


@dataclass(frozen=True)
class ClosedCover:
    """The closures of an OpenSet family, usable as Vietoris members."""

    base: OpenSet

    def __contains__(self, x) -> bool:
        return self.base.closure_contains(x)


class IntervalSpace:
    """[0, 1] with the usual metric; compact sets are finite rational sets here."""

    @staticmethod
    def contains(U: OpenSet, x) -> bool:
        return x in U

    @staticmethod
    def closure_contains(U: OpenSet, x) -> bool:
        return U.closure_contains(x)

    @staticmethod
    def witness_member(A: Sequence[Fraction], Us: Sequence[OpenSet], eta: Fraction) -> list[Fraction] | None:
        """A finite K in <Us> with H(K, A) < eta, or None when none exists.

        Any such K must hold a point of the union within eta of each a in A
        and a point of each U_i within eta of A; those choices also suffice.
        """
        K = []
        for a in A:
            pick = None
            for U in Us:
                c = U.point_near(a, eta)
                if c is not None and (pick is None or abs(c - a) < abs(pick - a)):
                    pick = c
            if pick is None:
                return None
            K.append(pick)
        for U in Us:
            pick = None
            for a in A:
                c = U.point_near(a, eta)
                if c is not None:
                    pick = c
                    break
            if pick is None:
                return None
            K.append(pick)
        return K

    @classmethod
    def in_hyperspace_closure(cls, A: Sequence[Fraction], Us: Sequence[OpenSet]) -> bool:
        """Is the finite set A a limit of members of <Us>?

        Decided at a scale eta below every positive gap between the rationals
        involved; at that scale existence of a K within eta is exact.
        """
        vals = sorted(set([Fraction(a) for a in A] + [e for U in Us for e in U.endpoints()] + [Fraction(0), Fraction(1)]))
        gaps = [b - a for a, b in zip(vals, vals[1:]) if b > a]
        eta = min(gaps) / 4 if gaps else Fraction(1, 4)
        K = cls.witness_member(A, Us, eta)
        if K is None:
            return False
        N = VietorisNbhd(tuple(Us))
        if not vietoris_contains(K, N):
            raise AssertionError("constructed set left the Vietoris set")
        if hausdorff_points(list(A), K, "interval") >= eta:
            raise AssertionError("constructed set is not eta-close")
        return True


def interval_closure_check(A: Sequence[Fraction], Us: Sequence[OpenSet]) -> dict:
    """Closure lemma on [0, 1] for one finite set A."""
    lhs = IntervalSpace.in_hyperspace_closure(A, Us)
    rhs = vietoris_contains(A, VietorisNbhd(tuple(ClosedCover(U) for U in Us)))
    inside = vietoris_contains(A, VietorisNbhd(tuple(Us)))
    return {"in_closure": lhs, "in_closed_nbhd": rhs, "in_nbhd": inside, "equal": lhs == rhs}


class NotInBoundary(ValueError):
    pass


def boundary_element_witness(space, Us: Sequence, A: Iterable) -> tuple:
    """(a, j) with a in A and a in cl(U_j) minus U_j, for A on the boundary of <Us>.

    ``space`` is a FiniteMetricSpace (members are label sets) or IntervalSpace
    (members are OpenSet).  The search follows the two ways A can fail to be
    in <Us>: it misses some U_j, or it sticks out of their union.
    """
    A = list(A)
    if not A:
        raise ValueError("A must be non-empty")
    if isinstance(space, FiniteMetricSpace):
        Us = [frozenset(U) for U in Us]
        cls_ = [space.closure(U) for U in Us]
        contains = lambda j, x: x in Us[j]
        cl_contains = lambda j, x: x in cls_[j]
        members = [K for K in all_nonempty_subsets(len(space)) if vietoris_contains(K, VietorisNbhd(tuple(Us)))]
        in_cl = bool(members) and min(space.hausdorff(frozenset(A), K) for K in members) == 0
    else:
        contains = lambda j, x: space.contains(Us[j], x)
        cl_contains = lambda j, x: space.closure_contains(Us[j], x)
        in_cl = space.in_hyperspace_closure(A, Us)
    in_n = vietoris_contains(A, VietorisNbhd(tuple(Us)))
    if in_n or not in_cl:
        raise NotInBoundary("A not in the boundary")
    n = len(Us)
    # case 1: A misses some U_j but touches its closure
    for j in range(n):
        if not any(contains(j, a) for a in A):
            for a in A:
                if cl_contains(j, a):
                    return _checked(a, j, contains, cl_contains)
    # case 2: some a lies outside every U_i
    for a in A:
        if not any(contains(i, a) for i in range(n)):
            for j in range(n):
                if cl_contains(j, a):
                    return _checked(a, j, contains, cl_contains)
    raise AssertionError("boundary element without a witness")


def _checked(a, j, contains, cl_contains):
    if contains(j, a) or not cl_contains(j, a):
        raise AssertionError("witness postcondition fails")
    return a, j


# ---------------------------------------------------------------------------
# the arc r -> D_r


@dataclass(frozen=True)
class ArcProfile:
    grid: tuple
    matrix: tuple  # tuple of tuples of Fraction
    resolutions: tuple

    def max_law_violation(self) -> Fraction:
        """max over pairs of | |H - |r-s|| - (res_r + res_s) |_+ ; zero means the law holds."""
        worst = Fraction(0)
        for i, r in enumerate(self.grid):
            for j, s in enumerate(self.grid):
                excess = abs(self.matrix[i][j] - abs(r - s)) - self.resolutions[i] - self.resolutions[j]
                worst = max(worst, excess)
        return worst

    def to_csv_rows(self) -> list[list[str]]:
        head = ["r"] + [_fs(r) for r in self.grid]
        return [head] + [[_fs(r)] + [_fs(v) for v in row] for r, row in zip(self.grid, self.matrix)]


def _fs(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def arc_profile(r_grid: Sequence[Fraction], eps: Fraction, branch_cutoff: int) -> ArcProfile:
    """Pairwise Hausdorff distances between nets of D_r over a grid of r."""
    grid = tuple(Fraction(r) for r in r_grid)
    if any(not 0 <= r <= 1 for r in grid):
        raise ValueError("grid must lie in [0, 1]")
    nets = [build_net_Dr(r, eps, branch_cutoff) for r in grid]
    chains = [[resolve(p) for p in net.points] for net in nets]
    indexes = [TreeIndex(c) for c in chains]
    n = len(grid)
    directed = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            directed[i][j] = Fraction(0) if i == j else max(indexes[j].nearest_distance(c) for c in chains[i])
    M = tuple(tuple(max(directed[i][j], directed[j][i]) for j in range(n)) for i in range(n))
    return ArcProfile(grid, M, tuple(net.resolution for net in nets))


# ---------------------------------------------------------------------------
# seeded batches of the closure-lemma checks


def _random_open_set(rng: random.Random, den: int) -> OpenSet:
    ivs = []
    for _ in range(rng.randint(1, 2)):
        # a < den and b > 0 keep the interval meeting (0, 1)
        a = rng.randint(-1, den - 1)
        b = rng.randint(max(a + 1, 1), den + 1)
        ivs.append((Fraction(a, den), Fraction(b, den)))
    return OpenSet(tuple(ivs))


def lemma_trials(trials: int, seed: int, sizes: Sequence[int] = (4, 5, 6), interval_den: int = 8) -> dict:
    """Closure lemma and boundary witnesses on seeded random instances.

    Each trial checks one random finite metric space exhaustively and one
    random interval instance, where a boundary set gets a witness that is
    re-checked before it is accepted.
    """
    rng = random.Random(seed)
    failures = []
    boundary_seen = 0
    witnesses = 0
    for t in range(trials):
        X = random_finite_metric_space(rng.choice(list(sizes)), rng)
        Us = [
            frozenset().union(*(ball(X, rng.randrange(len(X)), Fraction(rng.randint(1, 6))) for _ in range(rng.randint(1, 2))))
            for _ in range(rng.randint(1, 3))
        ]
        rep = vietoris_closure_bruteforce(X, Us)
        if not rep["equal"]:
            failures.append({"trial": t, "kind": "finite", "counterexamples": rep["counterexamples"]})
        for K in rep["boundary"]:
            boundary_seen += 1
            try:
                boundary_element_witness(X, Us, K)
                witnesses += 1
            except (AssertionError, NotInBoundary) as exc:
                failures.append({"trial": t, "kind": "finite-witness", "error": str(exc)})

        IUs = [_random_open_set(rng, interval_den) for _ in range(rng.randint(1, 3))]
        cands = sorted({e for U in IUs for e in U.endpoints() if 0 <= e <= 1} | {Fraction(i, interval_den) for i in range(interval_den + 1)})
        A = sorted(set(rng.sample(cands, rng.randint(1, min(3, len(cands))))))
        rep = interval_closure_check(A, IUs)
        if not rep["equal"]:
            failures.append({"trial": t, "kind": "interval", "A": [_fs(a) for a in A]})
        if rep["in_closure"] and not rep["in_nbhd"]:
            boundary_seen += 1
            try:
                boundary_element_witness(IntervalSpace(), IUs, A)
                witnesses += 1
            except (AssertionError, NotInBoundary) as exc:
                failures.append({"trial": t, "kind": "interval-witness", "error": str(exc)})
    return {
        "trials": trials,
        "seed": seed,
        "boundary_instances": boundary_seen,
        "witnesses": witnesses,
        "failures": failures,
    }
