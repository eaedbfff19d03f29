import random

from hypothesis import given, strategies as st

from pcfgames.arena import arena_of_type
from pcfgames.generators import (
    enumerate_sorted, enumerate_strategies, legal_responses, random_strategy, random_term,
)
from pcfgames.strategy import classify, dumps, is_valid
from pcfgames.syntax import NAT, typecheck

from helpers import GEN_TYPES, NAT_NAT


def test_legal_responses_at_root():
    ar = arena_of_type(NAT_NAT, 2)
    rs = legal_responses(ar, (0, -1))
    # answer 0, answer 1, or ask the argument
    assert len(rs) == 3


def test_enumeration_counts_small():
    # norm <= 1 at nat -> nat with window 2: bottom, two constants, and the bare question
    found = list(enumerate_strategies(NAT_NAT, 2, 1))
    assert len(found) == 4


def test_enumeration_is_sorted_and_distinct():
    xs = enumerate_sorted(NAT_NAT, 2, 3)
    keys = [(len(s), dumps(s)) for s in xs]
    assert keys == sorted(keys) and len(set(xs)) == len(xs)
    assert all(is_valid(s) for s in xs)


@given(st.integers(0, 10**6), st.sampled_from(GEN_TYPES))
def test_root_constraint(seed, t):
    rng = random.Random(seed)
    assert classify(random_strategy(rng, t, 3, 6, dom_len=1, root="total")).total
    assert not random_strategy(rng, t, 3, 6, root="defined").is_bottom()


@given(st.integers(0, 10**6), st.sampled_from((NAT,) + GEN_TYPES), st.booleans())
def test_random_terms_are_well_typed(seed, t, y):
    m = random_term(random.Random(seed), t, 3, depth=3, allow_y=y)
    assert typecheck((), m) == t
