"""Itineraries of points of the universal dendrite and the map acting on them.

A point other than the origin is addressed by (n1, a1, n2, a2, ..., nk, r):
beam n1 of the base star, the star hanging at parameter a1 on it, beam n2 of
that star, and so on, ending at parameter r in (0, 1] along beam nk.  The map
is a pure rewrite on these addresses:

    R0  (0)                  -> (0)
    R1  (n, ...)             -> (n-1, ...)            n >= 1
    R2  (0, r)               -> (0)
    R3  (0, p/2^l, m, ...)   -> (m+l, ...)

Points outside the union of the finite-depth dendrites need infinitely long
addresses.  Only the family (..., n, b_k, 0, b_{k+1}, 0, b_{k+2}, ...) with
b_k the k-th element of Gamma restricted to [0, r] is supported; it is all
the orbit of a point with omega-limit D_r ever visits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Union

from .dyadics import Dyadic, gamma_cap_kth, is_dyadic

Step = tuple[int, Dyadic]


@dataclass(frozen=True)
class Origin:
    def __str__(self) -> str:
        return "(0)"


ORIGIN = Origin()


@dataclass(frozen=True)
class Finite:
    """(n1, a1, ..., n_{k-1}, a_{k-1}, terminal_branch, param)."""

    steps: tuple[Step, ...]
    terminal_branch: int
    param: Fraction

    def __post_init__(self) -> None:
        _check_steps(self.steps, self.terminal_branch)
        if not isinstance(self.param, Fraction):
            object.__setattr__(self, "param", Fraction(self.param))
        if not 0 < self.param <= 1:
            raise ValueError(f"terminal parameter must lie in (0, 1], got {self.param}")

    @property
    def depth(self) -> int:
        return len(self.steps) + 1

    def __str__(self) -> str:
        return "(" + ",".join(_steps_tokens(self.steps) + [str(self.terminal_branch), _frac(self.param)]) + ")"


@dataclass(frozen=True)
class GammaTail:
    """Zero-interleaved tail b_k, 0, b_{k+1}, 0, ... over Gamma restricted to [0, r]."""

    r: Fraction
    next_index: int

    def __post_init__(self) -> None:
        if not isinstance(self.r, Fraction):
            object.__setattr__(self, "r", Fraction(self.r))
        if not 0 < self.r <= 1:
            raise ValueError(f"tail radius must lie in (0, 1], got {self.r}")
        if self.next_index < 1:
            raise ValueError("tail index starts at 1")

    def dyadic(self, offset: int = 0) -> Dyadic:
        return gamma_cap_kth(self.r, self.next_index + offset)

    def advance(self, by: int = 1) -> "GammaTail":
        return GammaTail(self.r, self.next_index + by)


@dataclass(frozen=True)
class Lazy:
    """(steps..., terminal_branch, b_k, 0, b_{k+1}, 0, ...) with k = tail.next_index."""

    steps: tuple[Step, ...]
    terminal_branch: int
    tail: GammaTail

    def __post_init__(self) -> None:
        _check_steps(self.steps, self.terminal_branch)

    def __str__(self) -> str:
        star = f"*gamma[{_frac(self.tail.r)},{self.tail.next_index}]"
        return "(" + ",".join(_steps_tokens(self.steps) + [str(self.terminal_branch), star]) + ")"


Itinerary = Union[Origin, Finite, Lazy]


def _check_steps(steps, terminal_branch) -> None:
    if terminal_branch < 0:
        raise ValueError("branch indices are nonnegative")
    for n, a in steps:
        if n < 0:
            raise ValueError("branch indices are nonnegative")
        if not isinstance(a, Dyadic):
            raise TypeError(f"star positions must be Dyadic, got {a!r}")


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _steps_tokens(steps) -> list[str]:
    out = []
    for n, a in steps:
        out += [str(n), str(a)]
    return out


def finite(*tokens) -> Finite:
    """Build a Finite itinerary from the flat vector (n1, a1, ..., nk, r).

    Star positions may be given as Dyadic, Fraction, or "p/q" strings.
    """
    if len(tokens) % 2 or not tokens:
        raise ValueError("a finite itinerary has an even number of coordinates")
    steps = []
    for i in range(0, len(tokens) - 2, 2):
        a = tokens[i + 1]
        if not isinstance(a, Dyadic):
            a = Dyadic.from_fraction(Fraction(a))
        steps.append((int(tokens[i]), a))
    return Finite(tuple(steps), int(tokens[-2]), Fraction(tokens[-1]))


def head_branch(it: Itinerary) -> int | None:
    if isinstance(it, Origin):
        return None
    return it.steps[0][0] if it.steps else it.terminal_branch


def rule_for(it: Itinerary) -> str:
    """Name of the single rewrite rule that applies to ``it``."""
    if isinstance(it, Origin):
        return "R0"
    if head_branch(it) >= 1:
        return "R1"
    if isinstance(it, Finite) and not it.steps:
        return "R2"
    return "R3"


def _decrement_head(it: Finite | Lazy) -> Finite | Lazy:
    if it.steps:
        (n, a), rest = it.steps[0], it.steps[1:]
        return replace(it, steps=((n - 1, a),) + rest)
    return replace(it, terminal_branch=it.terminal_branch - 1)


def increment_head(it: Finite | Lazy) -> Finite | Lazy:
    """Inverse of R1 on its image: raise the head branch by one."""
    if it.steps:
        (n, a), rest = it.steps[0], it.steps[1:]
        return replace(it, steps=((n + 1, a),) + rest)
    return replace(it, terminal_branch=it.terminal_branch + 1)


def apply_f(it: Itinerary) -> Itinerary:
    if isinstance(it, Origin):
        return it
    if head_branch(it) >= 1:
        return _decrement_head(it)
    if isinstance(it, Finite):
        if not it.steps:
            return ORIGIN
        l = it.steps[0][1].l
        rest = it.steps[1:]
        if rest:
            (m, b), rest = rest[0], rest[1:]
            return Finite(((m + l, b),) + rest, it.terminal_branch, it.param)
        return Finite((), it.terminal_branch + l, it.param)
    # Lazy
    if it.steps:
        l = it.steps[0][1].l
        rest = it.steps[1:]
        if rest:
            (m, b), rest = rest[0], rest[1:]
            return Lazy(((m + l, b),) + rest, it.terminal_branch, it.tail)
        return Lazy((), it.terminal_branch + l, it.tail)
    # (0, b_k, 0, b_{k+1}, ...) -> (l(b_k), b_{k+1}, 0, ...)
    return Lazy((), it.tail.dyadic().l, it.tail.advance())


def iterate_f(it: Itinerary, n: int) -> Itinerary:
    if n < 0:
        raise ValueError("iteration count must be nonnegative")
    for _ in range(n):
        if isinstance(it, Origin):
            break
        it = apply_f(it)
    return it


def origin_time_bound(it: Finite) -> int:
    """Closed-form cap sum(n_j + l_j + 1) + n_k + 1 on the time to reach (0)."""
    return sum(n + a.l + 1 for n, a in it.steps) + it.terminal_branch + 1


def time_to_origin(it: Itinerary) -> int:
    """Least N with f^N(it) = (0), found by forward iteration."""
    if isinstance(it, Lazy):
        raise ValueError("orbits of infinite itineraries never reach the origin")
    if isinstance(it, Origin):
        return 0
    cap = origin_time_bound(it)
    n = 0
    while not isinstance(it, Origin):
        it = apply_f(it)
        n += 1
        if n > cap:
            raise AssertionError(f"rewrite rules exceeded closed-form bound {cap}")
    return n


def special_point(r: Fraction) -> Lazy:
    """The point (0, b_1, 0, b_2, 0, b_3, ...) whose omega-limit set is D_r."""
    r = Fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    return Lazy((), 0, GammaTail(r, 1))


def return_times(r: Fraction, K: int) -> list[int]:
    """[m_2, ..., m_K]: the times at which the orbit of special_point(r) sits at (0, b_k, 0, b_{k+1}, ...)."""
    if K < 2:
        raise ValueError("K must be at least 2")
    it: Itinerary = special_point(r)
    out = []
    t = 0
    while len(out) < K - 1:
        it = apply_f(it)
        t += 1
        if isinstance(it, Lazy) and not it.steps and it.terminal_branch == 0:
            out.append(t)
            if it.tail.next_index != len(out) + 1:
                raise AssertionError("return time skipped a tail element")
    return out


@dataclass(frozen=True)
class OrbitState:
    itinerary: Itinerary
    step: int

    def advance(self) -> "OrbitState":
        return OrbitState(apply_f(self.itinerary), self.step + 1)


def pair_at(it: Finite | Lazy, j: int) -> tuple[int, Fraction, bool]:
    """(branch, parameter, is_last) of the j-th address pair, 0-based.

    For Lazy itineraries the pairs are materialised on demand and never last.
    """
    k = len(it.steps)
    if j < k:
        n, a = it.steps[j]
        return n, a.value, False
    if isinstance(it, Finite):
        if j == k:
            return it.terminal_branch, it.param, True
        raise IndexError(j)
    off = j - k
    branch = it.terminal_branch if off == 0 else 0
    return branch, it.tail.dyadic(off).value, False


def truncate(it: Lazy, pairs: int) -> Finite:
    """The star center reached after ``pairs`` materialised address pairs."""
    if pairs < 1:
        raise ValueError("need at least one pair")
    flat = []
    for j in range(pairs):
        n, t, _ = pair_at(it, j)
        flat += [n, t]
    return finite(*flat)


# text syntax ----------------------------------------------------------------


class ItineraryParseError(ValueError):
    def __init__(self, msg: str, text: str, position: int):
        super().__init__(f"{msg} at position {position}: {text!r}")
        self.position = position


def _split_top(body: str, offset: int) -> list[tuple[str, int]]:
    out, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append((body[start:i], offset + start))
            start = i + 1
    out.append((body[start:], offset + start))
    return out


def _parse_frac(tok: str, text: str, pos: int) -> Fraction:
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError):
        raise ItineraryParseError(f"bad rational {tok.strip()!r}", text, pos) from None


def _parse_int(tok: str, text: str, pos: int) -> int:
    s = tok.strip()
    if not s.isdigit():
        raise ItineraryParseError(f"bad branch index {s!r}", text, pos)
    return int(s)


def parse_itinerary(text: str) -> Itinerary:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ItineraryParseError("itinerary must be parenthesised", text, 0)
    body = s[1:-1]
    if body.strip() == "0":
        return ORIGIN
    toks = _split_top(body, 1)
    if len(toks) % 2:
        raise ItineraryParseError("odd number of coordinates", text, len(s) - 1)
    steps = []
    for i in range(0, len(toks) - 2, 2):
        n = _parse_int(toks[i][0], text, toks[i][1])
        v = _parse_frac(toks[i + 1][0], text, toks[i + 1][1])
        if not is_dyadic(v):
            raise ItineraryParseError(f"star position {v} is not a dyadic in (0,1)", text, toks[i + 1][1])
        steps.append((n, Dyadic.from_fraction(v)))
    tb = _parse_int(toks[-2][0], text, toks[-2][1])
    last, pos = toks[-1]
    last = last.strip()
    if last.startswith("*gamma[") and last.endswith("]"):
        inner = _split_top(last[7:-1], pos + 7)
        if len(inner) != 2:
            raise ItineraryParseError("tail needs *gamma[r,k]", text, pos)
        r = _parse_frac(inner[0][0], text, inner[0][1])
        k = _parse_int(inner[1][0], text, inner[1][1])
        try:
            return Lazy(tuple(steps), tb, GammaTail(r, k))
        except ValueError as e:
            raise ItineraryParseError(str(e), text, pos) from None
    r = _parse_frac(last, text, pos)
    try:
        return Finite(tuple(steps), tb, r)
    except ValueError as e:
        raise ItineraryParseError(str(e), text, pos) from None
