"""Dyadic rationals in (0, 1) and their level-by-level enumeration.

The enumeration lists 1/2, then 1/4, 3/4, then 1/8, 3/8, 5/8, 7/8, and so on:
every level-l dyadic comes before any level-(l+1) one, odd numerators
ascending inside a level.  Index n maps to p/2^l through
``n = 2**(l-1) + (p-1)//2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

Rational = Fraction


@dataclass(frozen=True, order=True)
class Dyadic:
    """p / 2**l with p odd and 0 < p < 2**l."""

    p: int
    l: int

    def __post_init__(self) -> None:
        if self.l < 1 or self.p < 1 or self.p % 2 == 0 or self.p >= 1 << self.l:
            raise ValueError(f"invalid dyadic {self.p}/2^{self.l}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, 1 << self.l)

    @property
    def level(self) -> int:
        return self.l

    @classmethod
    def from_fraction(cls, x: Fraction) -> "Dyadic":
        x = Fraction(x)
        den = x.denominator
        if den & (den - 1) or den == 1:
            raise ValueError(f"{x} is not a dyadic rational in (0, 1)")
        return cls(x.numerator, den.bit_length() - 1)

    def __str__(self) -> str:
        return f"{self.p}/{1 << self.l}"


def is_dyadic(x: Fraction) -> bool:
    """True when x is a dyadic rational strictly inside (0, 1)."""
    x = Fraction(x)
    den = x.denominator
    return 0 < x < 1 and den & (den - 1) == 0


def index_to_dyadic(n: int) -> Dyadic:
    if n < 1:
        raise ValueError("enumeration index starts at 1")
    l = n.bit_length()
    return Dyadic(2 * (n - (1 << (l - 1))) + 1, l)


def dyadic_to_index(a: Dyadic) -> int:
    return (1 << (a.l - 1)) + (a.p - 1) // 2


def gamma() -> Iterator[Dyadic]:
    """The full enumeration a_1, a_2, ... (infinite)."""
    return (index_to_dyadic(n) for n in itertools.count(1))


def _count_at_level(r: Fraction, l: int) -> int:
    # odd p in [1, 2^l - 1] with p <= r * 2^l
    top = min((r.numerator << l) // r.denominator, (1 << l) - 1)
    return (top + 1) // 2 if top >= 1 else 0


def gamma_cap_kth(r: Fraction, k: int) -> Dyadic:
    """k-th element of Gamma restricted to [0, r], enumeration order kept.

    The right endpoint is closed, so a dyadic r is itself a member.
    """
    r = Fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    if k < 1:
        raise ValueError("k starts at 1")
    l = 1
    while True:
        c = _count_at_level(r, l)
        if k <= c:
            return Dyadic(2 * k - 1, l)
        k -= c
        l += 1


def gamma_cap(r: Fraction) -> Iterator[Dyadic]:
    """b_1, b_2, ... for the given r, one level at a time."""
    r = Fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    for l in itertools.count(1):
        for i in range(_count_at_level(r, l)):
            yield Dyadic(2 * i + 1, l)


@dataclass(frozen=True)
class SequenceOmegaApprox:
    grid_step: Fraction
    n_terms: int
    hit_grid: frozenset

    def grid(self) -> list[Fraction]:
        return grid_points(self.grid_step)

    def marked_sorted(self) -> list[Fraction]:
        return sorted(self.hit_grid)


def grid_points(step: Fraction) -> list[Fraction]:
    step = Fraction(step)
    n = math.floor(1 / step)
    pts = [i * step for i in range(n + 1)]
    if pts[-1] != 1:
        pts.append(Fraction(1))
    return pts


def omega_of_sequence_approx(
    seq: Iterable, n_terms: int, grid_step: Fraction
) -> SequenceOmegaApprox:
    """Grid points of [0, 1] that look like limit points of ``seq``.

    A grid point g is marked when at least ceil(log2(N)) terms of the second
    half of the first N terms satisfy |t - g| <= grid_step.
    """
    grid_step = Fraction(grid_step)
    if n_terms < 1:
        raise ValueError("need at least one term")
    if grid_step <= 0 or grid_step >= 1:
        raise ValueError(f"grid_step must lie in (0, 1), got {grid_step}")
    terms = [t.value if isinstance(t, Dyadic) else Fraction(t) for t in itertools.islice(seq, n_terms)]
    if len(terms) < n_terms:
        raise ValueError("sequence shorter than requested prefix")
    need = max(1, math.ceil(math.log2(n_terms)))
    tail = terms[n_terms // 2:]
    grid = grid_points(grid_step)
    counts = [0] * len(grid)
    last = math.floor(1 / grid_step)
    extra = len(grid) - 1 if len(grid) - 1 > last else None
    for t in tail:
        # grid points g with |t - g| <= step are i*step for i in [ceil(t/step) - 1, floor(t/step) + 1]
        q = t / grid_step
        lo = max(0, math.ceil(q) - 1)
        hi = min(last, math.floor(q) + 1)
        for i in range(lo, hi + 1):
            if abs(grid[i] - t) <= grid_step:
                counts[i] += 1
        if extra is not None and 1 - t <= grid_step:
            counts[extra] += 1
    hit = frozenset(g for g, c in zip(grid, counts) if c >= need)
    return SequenceOmegaApprox(grid_step, n_terms, hit)
