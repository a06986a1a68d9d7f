"""Orbits, omega-limit approximations, and constructive transitivity witnesses.

Points with finite itineraries all fall into the origin, so sampling an open
set at random can never show that some iterate of it meets another open set.
Witnesses are built instead: a point of U is chosen whose address, after the
part that U prescribes, spells out a point of V.  The map eats the U part
symbol by symbol and lands exactly on that point of V.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .dyadics import Dyadic
from .geometry import CompactApprox, TreeIndex, build_net_Dr, resolve
from .hyperspace import hausdorff
from .itinerary import (
    ORIGIN,
    Finite,
    Itinerary,
    Lazy,
    Origin,
    apply_f,
    iterate_f,
    origin_time_bound,
    pair_at,
    special_point,
)

# ---------------------------------------------------------------------------
# cylinders


@dataclass(frozen=True)
class Cylinder:
    """Points whose address starts with ``prefix`` then (terminal_branch, t), lo < t < hi.

    t is either the final parameter or the position of a further star, so the
    set contains whole subtrees hanging inside the parameter window.
    """

    prefix: tuple
    terminal_branch: int
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not 0 <= self.lo < self.hi <= 1:
            raise ValueError(f"need 0 <= lo < hi <= 1, got ({self.lo}, {self.hi})")
        if self.terminal_branch < 0:
            raise ValueError("branch indices are nonnegative")
        for n, a in self.prefix:
            if n < 0 or not isinstance(a, Dyadic):
                raise ValueError(f"bad prefix pair {(n, a)!r}")

    def contains(self, it: Itinerary) -> bool:
        if isinstance(it, Origin):
            return False
        k = len(self.prefix)
        if isinstance(it, Finite) and len(it.steps) < k:
            return False
        for j, (n, a) in enumerate(self.prefix):
            m, t, last = pair_at(it, j)
            if last or m != n or t != a.value:
                return False
        m, t, _ = pair_at(it, k)
        return m == self.terminal_branch and self.lo < t < self.hi

    def __str__(self) -> str:
        head = ",".join(f"{n},{a}" for n, a in self.prefix)
        head = head + "," if head else ""
        return f"[{head}{self.terminal_branch},({self.lo},{self.hi})]"


def parse_cylinder(text: str) -> Cylinder:
    """Read the form printed by ``Cylinder.__str__``: [n1,a1,...,n,(lo,hi)]."""
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")) or "(" not in t:
        raise ValueError(f"cylinder must look like [n1,a1,...,n,(lo,hi)], got {text!r}")
    head, window = t[1:-1].split("(", 1)
    if not window.endswith(")"):
        raise ValueError(f"unterminated parameter window in {text!r}")
    lo, hi = (Fraction(v.strip()) for v in window[:-1].split(","))
    toks = [v.strip() for v in head.split(",") if v.strip()]
    if len(toks) % 2 != 1:
        raise ValueError(f"prefix must alternate branch,dyadic and end with a branch: {text!r}")
    prefix = tuple((int(toks[i]), Dyadic.from_fraction(Fraction(toks[i + 1]))) for i in range(0, len(toks) - 1, 2))
    return Cylinder(prefix, int(toks[-1]), lo, hi)


def dyadics_in(lo: Fraction, hi: Fraction, level: int) -> list[Dyadic]:
    """Level-``level`` dyadics strictly between lo and hi."""
    den = 1 << level
    p = math.floor(lo * den) + 1
    if p % 2 == 0:
        p += 1
    out = []
    while Fraction(p, den) < hi and p < den:
        out.append(Dyadic(p, level))
        p += 2
    return out


def first_dyadic_in(lo: Fraction, hi: Fraction, level: int) -> Dyadic | None:
    den = 1 << level
    p = math.floor(lo * den) + 1
    if p % 2 == 0:
        p += 1
    if p < den and Fraction(p, den) < hi:
        return Dyadic(p, level)
    return None


def simplest_dyadic(lo: Fraction, hi: Fraction) -> Dyadic:
    """Lowest-level dyadic inside (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    l = 1
    while True:
        a = first_dyadic_in(lo, hi, l)
        if a is not None:
            return a
        l += 1


def _target_param(V: Cylinder) -> Fraction:
    return (V.lo + V.hi) / 2


def _target(V: Cylinder) -> Finite:
    return Finite(tuple(V.prefix), V.terminal_branch, _target_param(V))


@dataclass(frozen=True)
class Witness:
    z: Itinerary
    n: int
    image: Itinerary
    verified: bool

    def to_json(self) -> dict:
        return {"z": str(self.z), "n": self.n, "image": str(self.image), "verified": self.verified}


def _build_z(U: Cylinder, a: Dyadic, padding: int, V: Cylinder) -> Finite:
    steps = tuple(U.prefix) + ((U.terminal_branch, a),)
    steps += ((0, Dyadic(1, 1)),) * padding
    steps += tuple(V.prefix)
    return Finite(steps, V.terminal_branch, _target_param(V))


def verify_witness(U: Cylinder, V: Cylinder, z: Itinerary, n: int) -> Witness:
    """Forward check: z in U and f^n(z) in V."""
    image = iterate_f(z, n)
    ok = U.contains(z) and V.contains(image)
    return Witness(z, n, image, ok)


def _time_to(z: Finite, target: Finite) -> int:
    cap = origin_time_bound(z)
    it: Itinerary = z
    for n in range(cap + 1):
        if it == target:
            return n
        it = apply_f(it)
    raise AssertionError(f"{z} never reached {target}")


def connecting_point(U: Cylinder, V: Cylinder) -> Witness:
    """A point z of U with f^n(z) in V, verified by iterating forward."""
    a = simplest_dyadic(U.lo, U.hi)
    z = _build_z(U, a, 0, V)
    n = _time_to(z, _target(V))
    w = verify_witness(U, V, z, n)
    if not w.verified:
        raise AssertionError(f"witness {z} failed forward verification")
    return w


def consumption_base(U: Cylinder) -> int:
    """Steps to consume U's address through the inserted star, minus its level.

    Inserting a level-l dyadic then yields a hitting time of base + l, and
    every (0, 1/2) padding pair adds 2.
    """
    return sum(n + a.l + 1 for n, a in U.prefix) + U.terminal_branch + 1


@dataclass
class MixingReport:
    U: Cylinder
    V: Cylinder
    threshold: int
    witnesses: list = field(default_factory=list)
    unreachable: list = field(default_factory=list)

    @property
    def all_verified(self) -> bool:
        return all(w.verified for w in self.witnesses)

    def to_json(self) -> dict:
        return {
            "U": str(self.U),
            "V": str(self.V),
            "threshold": self.threshold,
            "witnesses": [w.to_json() for w in self.witnesses],
            "unreachable": self.unreachable,
            "verified": self.all_verified,
        }


def _witness_at(U: Cylinder, V: Cylinder, n: int) -> Witness | None:
    base = consumption_base(U)
    extra = n - base
    pad = 0
    while extra - 2 * pad >= 1:
        a = first_dyadic_in(U.lo, U.hi, extra - 2 * pad)
        if a is not None:
            z = _build_z(U, a, pad, V)
            return verify_witness(U, V, z, n)
        pad += 1
    return None


def mixing_threshold(U: Cylinder) -> int:
    """Least N such that every n >= N has a witness of the padded form."""
    base = consumption_base(U)
    # beyond this level every level has a dyadic in the window
    l_all = 1
    while Fraction(2, 1 << l_all) >= U.hi - U.lo:
        l_all += 1
    last_bad = base
    for extra in range(1, l_all + 1):
        ok = any(
            first_dyadic_in(U.lo, U.hi, extra - 2 * p) is not None for p in range((extra - 1) // 2 + 1)
        )
        if not ok:
            last_bad = base + extra
    return last_bad + 1


def mixing_window(U: Cylinder, V: Cylinder, n_min: int, window: int) -> MixingReport:
    """Witnesses with exact hitting time n for every n in [n_min, n_min + window)."""
    if window < 1:
        raise ValueError("window must be at least 1")
    rep = MixingReport(U, V, mixing_threshold(U))
    for n in range(n_min, n_min + window):
        w = _witness_at(U, V, n)
        if w is None:
            rep.unreachable.append(n)
        else:
            if not w.verified:
                raise AssertionError(f"witness for n={n} failed forward verification")
            rep.witnesses.append(w)
    return rep


# ---------------------------------------------------------------------------
# orbits and omega-limit sets


def orbit(it: Itinerary, N: int) -> list[Itinerary]:
    if N < 1:
        raise ValueError("N must be at least 1")
    out = [it]
    for _ in range(N - 1):
        it = apply_f(it)
        out.append(it)
    return out


@dataclass(frozen=True)
class OmegaApprox:
    """The orbit tail {f^k(seed) : skip <= k < skip + length} as a net.

    ``points`` lists the distinct iterates in order of first appearance;
    ``tail_tol`` is the truncation used when measuring infinite itineraries.
    """

    seed: Itinerary
    skip: int
    length: int
    points: CompactApprox
    tail_tol: Fraction


def omega_approx(it: Itinerary, skip: int, length: int, tail_tol: Fraction = Fraction(1, 256)) -> OmegaApprox:
    if skip < 0 or length < 1:
        raise ValueError("need skip >= 0 and length >= 1")
    seed = it
    it = iterate_f(it, skip)
    seen: dict = {}
    for _ in range(length):
        if isinstance(it, Origin):
            seen.setdefault(it, None)
            break  # fixed from here on
        seen.setdefault(it, None)
        it = apply_f(it)
    net = CompactApprox(f"tail[{seed}]", tuple(seen), Fraction(0))
    return OmegaApprox(seed, skip, length, net, Fraction(tail_tol))


def verify_omega_equals_Dr(
    r: Fraction,
    skip: int = 1000,
    length: int = 20000,
    eps: Fraction = Fraction(1, 64),
    branch_cutoff: int = 16,
    tail_tol: Fraction = Fraction(1, 256),
) -> Fraction:
    """Hausdorff distance between the orbit tail of special_point(r) and a net of D_r."""
    return omega_report(r, skip, length, eps, branch_cutoff, tail_tol)["residual"]


def omega_report(
    r: Fraction,
    skip: int = 1000,
    length: int = 20000,
    eps: Fraction = Fraction(1, 64),
    branch_cutoff: int = 16,
    tail_tol: Fraction = Fraction(1, 256),
) -> dict:
    """Residual with both one-sided halves.

    ``tail_to_Dr`` bounds how far the orbit strays from D_r and ``Dr_to_tail``
    how much of D_r the orbit has not yet come close to.
    """
    r = Fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    om = omega_approx(special_point(r), skip, length, tail_tol)
    net = build_net_Dr(r, eps, branch_cutoff)
    half = Fraction(tail_tol) / 2
    tail_chains = [resolve(p, half) for p in om.points.points]
    net_chains = [resolve(p) for p in net.points]
    net_index, tail_index = TreeIndex(net_chains), TreeIndex(tail_chains)
    to_dr = max(net_index.nearest_distance(c) for c in tail_chains)
    to_tail = max(tail_index.nearest_distance(c) for c in net_chains)
    return {
        "r": r,
        "skip": skip,
        "length": length,
        "eps": Fraction(eps),
        "branch_cutoff": branch_cutoff,
        "tail_tol": Fraction(tail_tol),
        "tail_points": len(om.points.points),
        "net_points": len(net.points),
        "net_resolution": net.resolution,
        "tail_to_Dr": to_dr,
        "Dr_to_tail": to_tail,
        "residual": max(to_dr, to_tail),
    }


@dataclass(frozen=True)
class OmegaSample:
    approximations: tuple
    matrix: tuple


def sample_omega_hyperspace(
    seeds: Sequence[Itinerary], skip: int, length: int, tail_tol: Fraction = Fraction(1, 256)
) -> OmegaSample:
    """Omega approximations of several seeds and their pairwise Hausdorff distances."""
    if not seeds:
        raise ValueError("need at least one seed")
    oms = [omega_approx(s, skip, length, tail_tol) for s in seeds]
    n = len(oms)
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            M[i][j] = M[j][i] = hausdorff(oms[i].points, oms[j].points, tol=Fraction(tail_tol))
    return OmegaSample(tuple(oms), tuple(tuple(row) for row in M))


def shift_invariance_defect(om: OmegaApprox) -> int:
    """Number of images f(p), p in the tail, that are not in the tail shifted by one.

    Zero for every tail; the one new point f(last) is allowed.
    """
    pts = om.points.points
    if len(pts) == 1 and isinstance(pts[0], Origin):
        return 0
    tail = set(pts)
    last = iterate_f(om.seed, om.skip + om.length - 1)
    extra = apply_f(last)
    return sum(1 for p in pts if apply_f(p) not in tail and apply_f(p) != extra)


# ---------------------------------------------------------------------------
# seeded batches


def random_cylinder(rng: random.Random, max_depth: int = 3, max_branch: int = 5, max_level: int = 4) -> Cylinder:
    depth = rng.randint(0, max_depth)
    prefix = []
    for _ in range(depth):
        l = rng.randint(1, max_level)
        prefix.append((rng.randint(0, max_branch), Dyadic(2 * rng.randrange(1 << (l - 1)) + 1, l)))
    den = rng.choice([4, 8, 16, 32])
    lo, hi = sorted(rng.sample(range(den + 1), 2))
    return Cylinder(tuple(prefix), rng.randint(0, max_branch), Fraction(lo, den), Fraction(hi, den))


def transitivity_batch(pairs: int, seed: int, window: int = 10, max_depth: int = 3) -> dict:
    """Connecting points and mixing windows for seeded random cylinder pairs."""
    rng = random.Random(seed)
    rows = []
    failures = []
    for i in range(pairs):
        U, V = random_cylinder(rng, max_depth), random_cylinder(rng, max_depth)
        try:
            w = connecting_point(U, V)
            rep = mixing_window(U, V, mixing_threshold(U), window)
        except AssertionError as exc:
            failures.append({"pair": i, "U": str(U), "V": str(V), "error": str(exc)})
            continue
        ok = w.verified and rep.all_verified and not rep.unreachable and len(rep.witnesses) == window
        if not ok:
            failures.append({"pair": i, "U": str(U), "V": str(V), "unreachable": rep.unreachable})
        rows.append({"U": str(U), "V": str(V), "n": w.n, "threshold": rep.threshold, "window_verified": len(rep.witnesses)})
    return {"pairs": pairs, "seed": seed, "window": window, "results": rows, "failures": failures}
