from fractions import Fraction

from hypothesis import strategies as st

from wazewski.dyadics import Dyadic
from wazewski.itinerary import ORIGIN, Finite


@st.composite
def dyadics(draw, max_level: int = 8) -> Dyadic:
    l = draw(st.integers(1, max_level))
    p = 2 * draw(st.integers(0, (1 << (l - 1)) - 1)) + 1
    return Dyadic(p, l)


@st.composite
def params(draw) -> Fraction:
    q = draw(st.integers(1, 64))
    return Fraction(draw(st.integers(1, q)), q)


@st.composite
def finite_itineraries(draw, max_depth: int = 4, max_branch: int = 8, max_level: int = 5) -> Finite:
    steps = draw(st.lists(st.tuples(st.integers(0, max_branch), dyadics(max_level)), max_size=max_depth - 1))
    return Finite(tuple(steps), draw(st.integers(0, max_branch)), draw(params()))


def points(**kw):
    return st.one_of(st.just(ORIGIN), finite_itineraries(**kw))
