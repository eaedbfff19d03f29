import random

import pytest
from hypothesis import given, strategies as st

from pcfgames.definability import (
    BOTTOM, CUT, Leaf, Node, approximant, extract_term, extract_term_pk, has_cut,
    parse_tree, show_tree, stabilization_bound, strategy_of_tree, tree_depth,
    tree_of_strategy, tree_of_term, truncate_tree, unroll_y, y_term,
)
from pcfgames.denotation import denote
from pcfgames.generators import random_strategy, random_term
from pcfgames.strategy import classify
from pcfgames.syntax import NAT, show, typecheck

from helpers import GEN_TYPES, NAT_NAT, P, T

seeds = st.integers(0, 10**6)
types = st.sampled_from(GEN_TYPES)


def test_tree_of_case():
    t = tree_of_term(P("\\x:nat. case[2] x 1 0"), window=3)
    assert isinstance(t, Node) and t.head == 1
    assert t.branches == {0: Leaf((), 1), 1: Leaf((), 0)}


def test_tree_text_round_trip():
    t = tree_of_term(P("\\f:nat->nat. f (f 1)"), window=2)
    assert parse_tree(show_tree(t)) == t
    assert parse_tree("bot") == BOTTOM and parse_tree("cut") == CUT


def test_depth_bound_leaves_cut():
    t = tree_of_term(P("\\f:nat->nat. f (f (f 0))"), depth_bound=2, window=2)
    assert has_cut(t) and tree_depth(t) <= 2


def test_p3_stabilises_case():
    f = denote(P("\\x:nat. case[2] x 1 0"), window=3)
    assert approximant(f, 2) != f
    assert approximant(f, 3) == f
    assert stabilization_bound(f) == 3


def test_p1_keeps_only_the_head_call():
    f = denote(P("\\x:nat. case[2] x 1 0"), window=3)
    p1 = approximant(f, 1)
    assert classify(p1).total and len(p1) == 1


def test_y_term_unrolling():
    m = P("Y[nat->nat] (\\f:nat->nat. \\n:nat. case[2] n 0 (f 0))")
    u = unroll_y(m, 3)
    assert "Y[" not in show(u)
    assert typecheck((), u) == typecheck((), m)
    assert typecheck((), y_term(NAT_NAT, 2)) == T("((nat->nat)->nat->nat)->nat->nat")


@given(seeds, types)
def test_extract_then_denote(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6)
    assert denote(extract_term(f), window=3) == f


@given(seeds, types, st.integers(0, 8))
def test_pk_term_matches_approximant(seed, t, k):
    f = random_strategy(random.Random(seed), t, 3, 6)
    assert denote(extract_term_pk(f, k), window=3) == approximant(f, k)


@given(seeds, types)
def test_stabilization_is_exact(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6)
    k = stabilization_bound(f)
    assert approximant(f, k) == f
    assert k == 0 or approximant(f, k - 1) != f


@given(seeds, types, st.integers(0, 6))
def test_truncation_commutes_with_trees(seed, t, k):
    f = random_strategy(random.Random(seed), t, 3, 6)
    assert tree_of_strategy(approximant(f, k)) == truncate_tree(tree_of_strategy(f), k)


@given(seeds, types, st.sampled_from(["compose", "direct"]))
def test_tree_round_trip(seed, t, route):
    f = random_strategy(random.Random(seed), t, 3, 6)
    assert strategy_of_tree(tree_of_strategy(f), t, 3, route=route) == f


@given(seeds, st.sampled_from((NAT,) + GEN_TYPES))
def test_oracle_agrees_on_random_terms(seed, t):
    m = random_term(random.Random(seed), t, 3, depth=3)
    assert tree_of_strategy(denote(m, window=3)) == tree_of_term(m, window=3)


@given(seeds, st.sampled_from((NAT,) + GEN_TYPES))
def test_oracle_agrees_with_y(seed, t):
    m = random_term(random.Random(seed), t, 3, depth=3, allow_y=True)
    assert tree_of_strategy(denote(m, unroll=6, window=3), 4) == tree_of_term(m, 4, 3, unroll=6)
