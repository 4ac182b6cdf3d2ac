"""Shared hypothesis strategies."""
from fractions import Fraction

from hypothesis import strategies as st

from tvx.algebra import QLaurent

small_fracs = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def laurents(draw, max_terms=4, span=4):
    exps = draw(st.lists(st.integers(-span, span), max_size=max_terms, unique=True))
    return QLaurent({e: draw(small_fracs) for e in exps})


nonzero_laurents = laurents().filter(lambda p: not p.is_zero())
