import random
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from housealloc.core import ValueProfile

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rationals(max_num=200, max_den=7):
    return st.builds(Fraction, st.integers(0, max_num), st.integers(1, max_den))


def value_lists(min_size=1, max_size=7, unique=False):
    return st.lists(rationals(), min_size=min_size, max_size=max_size, unique=unique)


@st.composite
def graphs(draw, min_n=1, max_n=7):
    from housealloc.graphs import Graph

    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, tuple(chosen))


@st.composite
def instances(draw, min_n=1, max_n=7):
    g = draw(graphs(min_n, max_n))
    vals = draw(st.lists(rationals(), min_size=g.n, max_size=g.n))
    return g, ValueProfile.from_values(vals)


def rand_values(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(0, 999), rng.randint(1, 9)) for _ in range(n)]


@pytest.fixture
def rng():
    return random.Random(12345)


FIG1_EDGES = ((0, 1), (1, 2), (2, 3), (0, 4), (1, 4))
FIG1_VALUES = (1, 2, 4, 5, 6)
FIG1_HOUSES = (0, 3, 1, 4, 2)
