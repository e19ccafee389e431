import sys

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from cpnlogic.formula import BOT, Atom, CmpPl, Imp, parse
from cpnlogic.semantics import NeighbourhoodModel

# the provers raise it on first use; doing it up front keeps hypothesis quiet
sys.setrecursionlimit(20000)

settings.register_profile("ci", max_examples=100, deadline=None)
settings.load_profile("ci")

CO = "(p <= q) | (q <= p)"

leaves = st.one_of(st.sampled_from([Atom("p"), Atom("q"), Atom("r"), Atom("x_1")]), st.just(BOT))


def formulas(max_leaves: int = 12):
    return st.recursive(
        leaves,
        lambda sub: st.one_of(st.builds(Imp, sub, sub), st.builds(CmpPl, sub, sub)),
        max_leaves=max_leaves,
    )


@pytest.fixture
def co():
    return parse(CO)


@pytest.fixture
def co_model():
    return NeighbourhoodModel(3, [[[1], [2]], [], []], {"p": [2], "q": [1]})
