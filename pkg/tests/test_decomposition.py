import random

import pytest
from hypothesis import given, strategies as st

from pcfgames.decomposition import (
    Bot, Bounds, Const, Total, assemble, check_axiom, decompose, join_head,
    random_decomposition, recompose, split_head,
)
from pcfgames.denotation import denote
from pcfgames.generators import random_strategy
from pcfgames.strategy import bottom, classify, der, norm, point

from helpers import GEN_TYPES, HO, NAT_NAT, P, T

seeds = st.integers(0, 10**6)
types = st.sampled_from(GEN_TYPES)


def test_trichotomy_examples():
    assert isinstance(decompose(bottom((T("nat"),), T("nat"), 3)), Bot)
    assert decompose(point(2, 3, dom=(T("nat"),))) == Const(2)
    d = decompose(der(T("nat"), 3))
    assert isinstance(d, Total) and d.i == 1 and d.args == ()
    assert set(d.branches) == {0, 1, 2}


def test_case_decomposition_reads_branches():
    f = denote(P("\\x:nat. case[2] x 1 0"), window=3)
    d = decompose(f)
    assert d.i == 1
    assert decompose(d.branches[0]) == Const(1)
    assert decompose(d.branches[1]) == Const(0)
    assert 2 not in d.branches


def test_higher_order_head_arguments():
    f = denote(P("\\f:nat->nat. f (f 1)"), window=3)
    d = decompose(f)
    assert d.i == 1 and len(d.args) == 1
    inner = decompose(d.args[0])
    assert inner.i == 1 and decompose(inner.args[0]) == Const(1)


@given(seeds, types)
def test_recompose_inverts_decompose(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6)
    d = decompose(f)
    assert recompose(d, t, 3) == f
    assert assemble(d, t, 3) == f


@given(seeds, types)
def test_decompose_inverts_recompose(seed, t):
    d = random_decomposition(random.Random(seed), t, 3, 6)
    assert decompose(recompose(d, t, 3)) == d


@given(seeds, types)
def test_arguments_have_smaller_norm(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6, dom_len=1, root="total")
    d = decompose(f)
    assert classify(f).total
    for g in list(d.args) + list(d.branches.values()):
        assert norm(g) < norm(f)


@given(seeds, types)
def test_split_join_head(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6, root="total")
    d = decompose(f)
    assert join_head(split_head(f), d.i - 1) == f  # join_head counts from 0


@pytest.mark.parametrize("which", ["A1", "A2", "A3", "A4", "A5"])
def test_axiom_suites_small(which):
    rep = check_axiom(which, cases=25, seed=11, bounds=Bounds())
    assert rep.ok, rep.failures[:2]
    assert rep.cases >= 25


def test_unknown_axiom():
    with pytest.raises(ValueError):
        check_axiom("A9", 1)


def test_suites_notice_a_broken_composition(monkeypatch):
    import pcfgames.decomposition as dec
    from pcfgames.strategy import Strategy, compose1 as real

    def lossy(f, g, budget=None):
        r = real(f, g)
        vf = dict(r.viewfn)
        if len(vf) > 2:
            vf.pop(max(vf))
        return Strategy(r.dom, r.cod, r.window, vf)

    monkeypatch.setattr(dec, "compose1", lossy)
    assert not check_axiom("A3", 50, 0).ok
