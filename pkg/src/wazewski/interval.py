"""The tent map on [0, 1] as a reference transitive system.

Everything is exact: rationals stay rationals under the tent map and their
denominators never grow, so every rational orbit is eventually periodic and
its cycle is its omega-limit set.  "Transitive point" is replaced by "point
whose first N iterates are delta-dense", which is checkable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import CompactApprox
from .hyperspace import ClosedCover, OpenSet, VietorisNbhd, vietoris_contains

HALF = Fraction(1, 2)


def tent(x: Fraction) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"tent map is defined on [0, 1], got {x}")
    return 2 * x if x <= HALF else 2 - 2 * x


@dataclass(frozen=True)
class TentOrbit:
    seed: Fraction
    preperiod: int
    period: int
    cycle: tuple


class CapExceeded(RuntimeError):
    pass


def eventual_period(x: Fraction, cap: int = 1_000_000) -> TentOrbit:
    """Exact preperiod and period of x; raises when more than ``cap`` iterates are needed."""
    x = Fraction(x)
    seen: dict[Fraction, int] = {}
    orbit = []
    y = x
    while y not in seen:
        if len(orbit) >= cap:
            raise CapExceeded(f"no repetition within {cap} iterates of {x}")
        seen[y] = len(orbit)
        orbit.append(y)
        y = tent(y)
    pre = seen[y]
    return TentOrbit(x, pre, len(orbit) - pre, tuple(orbit[pre:]))


def is_periodic_orbit(F: Iterable[Fraction]) -> bool:
    """True iff the tent map permutes F as a single cycle."""
    pts = {Fraction(v) for v in F}
    if not pts:
        raise ValueError("F must be non-empty")
    if any(not 0 <= v <= 1 for v in pts):
        return False
    start = min(pts)
    y = start
    visited = set()
    for _ in range(len(pts)):
        if y not in pts or y in visited:
            return False
        visited.add(y)
        y = tent(y)
    return y == start and visited == pts


def is_finite_omega_limit(F: Iterable[Fraction]) -> bool:
    """A finite set is an omega-limit set exactly when it is a periodic orbit."""
    return is_periodic_orbit(F)


def interior_empty_demo(B: Iterable[Fraction], y: Fraction) -> dict:
    """Show that B and B with y added cannot both be omega-limit sets.

    Any Vietoris neighbourhood of a finite omega-limit set B contains B plus a
    nearby point; that set is never a periodic orbit, because the cycle
    through a point of B already closes inside B.
    """
    B = sorted({Fraction(b) for b in B})
    y = Fraction(y)
    if not is_periodic_orbit(B):
        raise ValueError("B must be a periodic orbit")
    if y in B:
        raise ValueError("y must not lie in B")
    C = sorted(B + [y])
    images = {str(c): str(tent(c)) for c in C}
    escaped = [str(c) for c in C if tent(c) not in C]
    ok = not is_finite_omega_limit(C)
    return {
        "B": [str(b) for b in B],
        "y": str(y),
        "C": [str(c) for c in C],
        "B_is_periodic_orbit": True,
        "C_is_omega_limit": not ok,
        "images": images,
        "leaves_C": escaped,
        "passed": ok,
    }


# ---------------------------------------------------------------------------
# dense orbits


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _next_prime(n: int) -> int:
    while not _is_prime(n):
        n += 1
    return n


def delta_dense(values: Sequence[Fraction], delta: Fraction, lo=Fraction(0), hi=Fraction(1)) -> bool:
    """Is every point of [lo, hi] within delta of some value?"""
    vs = sorted(values)
    if not vs:
        return False
    if vs[0] - lo > delta or hi - vs[-1] > delta:
        return False
    return all(b - a <= 2 * delta for a, b in zip(vs, vs[1:]))


def tent_orbit_values(x: Fraction, N: int) -> list[Fraction]:
    """x, T(x), ..., T^(N-1)(x), computed on numerators over x's denominator."""
    x = Fraction(x)
    q = x.denominator
    p = x.numerator
    out = []
    for _ in range(N):
        out.append(Fraction(p, q))
        p = 2 * p if 2 * p <= q else 2 * q - 2 * p
    return out


class SearchExhausted(RuntimeError):
    pass


def dense_orbit_search(
    delta: Fraction,
    N: int,
    seeds: int,
    rng_seed: int,
    lo: Fraction = Fraction(0),
    hi: Fraction = Fraction(1),
) -> Fraction:
    """A seed in (lo, hi) whose first N tent iterates are delta-dense in [0, 1].

    Candidates are p/q with q a prime above 10^6 drawn from ``rng_seed``.
    """
    delta, lo, hi = Fraction(delta), Fraction(lo), Fraction(hi)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not 0 <= lo < hi <= 1:
        raise ValueError("search window must be a non-empty part of [0, 1]")
    rng = random.Random(rng_seed)
    tried = []
    for _ in range(seeds):
        q = _next_prime(rng.randrange(1_000_000, 2_000_000))
        # numerators strictly inside the window
        p_lo = int(lo * q) + 1
        p_hi = math.ceil(hi * q) - 1
        if p_lo > p_hi:
            continue
        p = rng.randint(p_lo, p_hi)
        x = Fraction(p, q)
        if not lo < x < hi:
            continue
        vals = tent_orbit_values(x, N)
        if delta_dense(vals, delta):
            return x
        tried.append(str(x))
    raise SearchExhausted(
        f"no delta-dense seed among {seeds} candidates (delta={delta}, N={N}, window=({lo},{hi})); "
        f"last tried {tried[-3:]}"
    )


# ---------------------------------------------------------------------------
# separating omega-limit sets


@dataclass
class SeparatorPair:
    """Disjoint open sets of the hyperspace separating two omega-limit sets.

    The cut points r_i sit on both sides of p inside (p - delta, p + delta);
    the pieces K_j left after removing the window are [0, r_1) and (r_2, 1].
    ``U_nbhd`` is <K_j : B meets K_j>; the second set is everything outside
    the closure of ``U_nbhd``, i.e. outside <cl K_j : B meets K_j>.
    """

    p: Fraction
    delta: Fraction
    cut_points: tuple
    pieces: tuple  # OpenSet per K_j
    selected: tuple  # indices of the pieces B meets
    density: dict = field(default_factory=dict)

    @property
    def U_nbhd(self) -> VietorisNbhd:
        return VietorisNbhd(tuple(self.pieces[j] for j in self.selected))

    @property
    def closed_nbhd(self) -> VietorisNbhd:
        return VietorisNbhd(tuple(ClosedCover(self.pieces[j]) for j in self.selected))

    def in_U(self, pts: Iterable[Fraction]) -> bool:
        return vietoris_contains(pts, self.U_nbhd)

    def in_V(self, pts: Iterable[Fraction]) -> bool:
        return not vietoris_contains(pts, self.closed_nbhd)

    def to_json(self) -> dict:
        left = [c for c in self.cut_points if c < self.p]
        right = [c for c in self.cut_points if c > self.p]
        return {
            "p": _fs(self.p),
            "delta": _fs(self.delta),
            "r1": _fs(left[0]) if left else None,
            "r2": _fs(right[0]) if right else None,
            "cut_points": [_fs(c) for c in self.cut_points],
            "pieces": [[[_fs(lo), _fs(hi)] for lo, hi in K.intervals] for K in self.pieces],
            "selected": list(self.selected),
            "density": self.density,
        }


def _fs(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class NoSeparatingPoint(ValueError):
    pass


def _dist_to(x: Fraction, pts: Sequence[Fraction]) -> Fraction:
    return min(abs(x - b) for b in pts)


def separation_construct(
    A: CompactApprox,
    B: CompactApprox,
    delta: Fraction,
    density_N: int = 10_000,
    density_delta: Fraction = Fraction(1, 32),
    density_seeds: int = 200,
    rng_seed: int = 0,
) -> SeparatorPair:
    """Separate A from B by disjoint open sets of the hyperspace.

    p is the point of A farthest from B (must be more than 2 delta away).  The
    cut points are delta-dense-orbit seeds picked on either side of p.
    """
    delta = Fraction(delta)
    Apts = [Fraction(a) for a in A.points]
    Bpts = [Fraction(b) for b in B.points]
    if set(Apts) == set(Bpts):
        raise NoSeparatingPoint("A and B are the same net")
    p = max(Apts, key=lambda a: (_dist_to(a, Bpts), -a))
    if _dist_to(p, Bpts) <= 2 * delta:
        raise NoSeparatingPoint(f"no point of A is more than 2*delta={2 * delta} from B")
    cuts = []
    density = {"N": density_N, "delta": _fs(density_delta)}
    seed_no = rng_seed
    if p - delta > 0:
        r1 = dense_orbit_search(density_delta, density_N, density_seeds, seed_no, p - delta, p)
        cuts.append(r1)
    if p + delta < 1:
        r2 = dense_orbit_search(density_delta, density_N, density_seeds, seed_no + 1, p, p + delta)
        cuts.append(r2)
    pieces = []
    if cuts and cuts[0] < p:
        pieces.append(OpenSet(((Fraction(-1), cuts[0]),)))
    if cuts and cuts[-1] > p:
        pieces.append(OpenSet(((cuts[-1], Fraction(2)),)))
    if not pieces:
        raise NoSeparatingPoint("window covers the whole interval; shrink delta")
    selected = tuple(j for j, K in enumerate(pieces) if any(b in K for b in Bpts))
    sep = SeparatorPair(p, delta, tuple(cuts), tuple(pieces), selected, density)
    # the two claims of the construction, checked rather than assumed
    if not sep.in_U(Bpts):
        raise AssertionError("B is not in the first set")
    if not sep.in_V(Apts):
        raise AssertionError("A is not in the second set")
    density["cut_points_dense"] = all(
        delta_dense(tent_orbit_values(c, density_N), density_delta) for c in cuts
    )
    return sep


def classify(sep: SeparatorPair, sample: CompactApprox) -> str:
    """'U', 'V', or 'margin' when a sample point is within its resolution of a cut point."""
    pts = [Fraction(x) for x in sample.points]
    res = Fraction(sample.resolution)
    if any(abs(x - c) <= res for x in pts for c in sep.cut_points):
        return "margin"
    in_u, in_v = sep.in_U(pts), sep.in_V(pts)
    if in_u and in_v:
        raise AssertionError("sample placed in both sets")
    if in_u:
        return "U"
    if in_v:
        return "V"
    # away from the cut points <K> and <cl K> agree, so this cannot happen
    raise AssertionError("sample in neither set outside the margin")


def separation_verify(sep: SeparatorPair, samples: Sequence[CompactApprox]) -> dict:
    labels = [classify(sep, s) for s in samples]
    counts = {k: labels.count(k) for k in ("U", "V", "margin")}
    n = len(labels)
    return {
        "separator": sep.to_json(),
        "classification": [{"label": s.label, "class": c} for s, c in zip(samples, labels)],
        "counts": counts,
        "outside_margin_fraction": (n - counts["margin"]) / n if n else 1.0,
    }


def cycle_net(x: Fraction, cap: int = 1_000_000) -> CompactApprox:
    """The exact omega-limit set of a rational seed, as a zero-resolution net."""
    orb = eventual_period(x, cap)
    return CompactApprox(f"omega({_fs(x)})", tuple(sorted(orb.cycle)), Fraction(0))


def dense_orbit_net(delta: Fraction, N: int, rng_seed: int, seeds: int = 200) -> CompactApprox:
    """The first N iterates of a delta-dense seed: a net of [0, 1] at resolution delta."""
    x = dense_orbit_search(delta, N, seeds, rng_seed)
    return CompactApprox(f"orbit({_fs(x)})", tuple(sorted(set(tent_orbit_values(x, N)))), Fraction(delta))


# ---------------------------------------------------------------------------
# seeded suite


def _random_unit_rational(rng: random.Random, max_den: int) -> Fraction:
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(0, q), q)


def _random_periodic_orbit(rng: random.Random, max_den: int = 60) -> tuple:
    return tuple(sorted(eventual_period(_random_unit_rational(rng, max_den)).cycle))


def tent_suite(seed: int, n_seeds: int = 100, n_demos: int = 20, n_samples: int = 20, delta: Fraction = Fraction(1, 16)) -> dict:
    """Periodicity, the finite omega-limit characterisation, and the separation construction."""
    rng = random.Random(seed)
    failures = []

    periods = []
    for _ in range(n_seeds):
        x = _random_unit_rational(rng, 10_000)
        orb = eventual_period(x)
        start = tent_orbit_values(x, orb.preperiod + orb.period + 1)
        if start[orb.preperiod] != start[-1] or not is_finite_omega_limit(orb.cycle):
            failures.append({"check": "eventual_period", "seed": _fs(x)})
        periods.append(orb.period)

    fixtures = {"2/3": ({Fraction(2, 3)}, True), "2/5,4/5": ({Fraction(2, 5), Fraction(4, 5)}, True), "1/3": ({Fraction(1, 3)}, False)}
    for name, (F, want) in fixtures.items():
        if is_finite_omega_limit(F) != want:
            failures.append({"check": "fixture", "set": name})

    demos = 0
    while demos < n_demos:
        B = _random_periodic_orbit(rng)
        y = Fraction(rng.randint(0, 97), 97)
        if y in B:
            continue
        if not interior_empty_demo(B, y)["passed"]:
            failures.append({"check": "interior_empty", "B": [_fs(b) for b in B], "y": _fs(y)})
        demos += 1

    A = CompactApprox("fixed(2/3)", (Fraction(2, 3),), Fraction(0))
    B = CompactApprox("cycle(2/5)", (Fraction(2, 5), Fraction(4, 5)), Fraction(0))
    sep = separation_construct(A, B, delta, rng_seed=seed)
    samples = [cycle_net(_random_unit_rational(rng, 60)) for _ in range(n_samples)]
    report = separation_verify(sep, samples)
    if report["outside_margin_fraction"] < 0.95:
        failures.append({"check": "separation", "outside_margin_fraction": report["outside_margin_fraction"]})
    pair = [classify(sep, A), classify(sep, B)]
    if pair != ["V", "U"]:
        failures.append({"check": "separation_pair", "classes": pair})
    return {
        "seed": seed,
        "max_period": max(periods),
        "separation": report,
        "failures": failures,
    }
