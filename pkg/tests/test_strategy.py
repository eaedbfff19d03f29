import random

import pytest
from hypothesis import given, strategies as st

from pcfgames.generators import random_strategy
from pcfgames.strategy import (
    ShapeError, StrategyFormatError, StructuralKind, apply_value, bottom, case_strategy,
    check_strategy, classify, compose, der, dumps, identity, is_strict_semantic, is_valid,
    leq, loads, mediate, norm, point, proj, promote, strategy_eq, structural, weaken,
)
from pcfgames.syntax import NAT

from helpers import GEN_TYPES, HO, NAT2, NAT_NAT, T

seeds = st.integers(0, 10**6)


def test_dereliction_norm():
    # the initial question plus one copy per answer value
    assert norm(der(NAT, 3)) == 4


def test_case_strategy_norm():
    assert norm(case_strategy(2, 3)) == 9


def test_point_and_bottom():
    p = point(2, 3)
    assert p.first_response() is not None and norm(p) == 1
    assert bottom((), NAT, 3).is_bottom()
    assert leq(bottom((), NAT, 3), p) and not leq(p, bottom((), NAT, 3))


def test_apply_value_case():
    c = case_strategy(2, 3)
    args = [point(1, 3), bottom((), NAT, 3), point(2, 3)]
    assert apply_value(args, c.uncurried()) == 2
    args = [point(0, 3), bottom((), NAT, 3), point(2, 3)]
    assert apply_value(args, c.uncurried()) is None


def test_projection_composition():
    dom = (NAT, NAT)
    x = [point(0, 3, dom=()), point(2, 3, dom=())]
    assert apply_value(x, proj(dom, 1, 3)) == 2


def test_shape_errors():
    with pytest.raises(ShapeError):
        compose([der(NAT, 3)], der(NAT, 2))
    with pytest.raises(ShapeError):
        compose([], der(NAT, 3))
    with pytest.raises(ShapeError):
        der(NAT, 3).with_dom((NAT_NAT,))


def test_mediate_of_bottoms_is_strict():
    m = mediate({}, NAT, 3)
    c = classify(m.with_dom((NAT,)))
    assert c.strict and c.total


def test_structural_dispatch():
    assert structural(StructuralKind.DER, a=NAT, window=3) == der(NAT, 3)
    assert structural("proj", dom=(NAT, NAT), i=0, window=3) == proj((NAT, NAT), 0, 3)
    f = der(NAT, 3)
    assert promote(f).then(f) == f
    cur = structural(StructuralKind.CURRY, of=der(NAT2, 3).uncurried(), n=1)
    assert cur.dom == (NAT2,) and cur.cod == T("nat -> nat -> nat")


def test_serialization_rejects_garbage():
    with pytest.raises(StrategyFormatError):
        loads("not a strategy")
    text = dumps(der(NAT, 3)).replace("norm 4", "norm 5")
    with pytest.raises(StrategyFormatError):
        loads(text)


def test_check_strategy_flags_bad_polarity():
    f = der(NAT, 3)
    vf = dict(f.viewfn)
    key = next(iter(vf))
    vf[key] = (0, 0)          # the root is an O-move
    from pcfgames.strategy import Strategy
    assert check_strategy(Strategy(f.dom, f.cod, 3, vf))


@given(seeds, st.sampled_from(GEN_TYPES))
def test_random_strategies_are_valid(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6)
    assert is_valid(f), check_strategy(f)
    assert norm(f) <= 6


@given(seeds, st.sampled_from(GEN_TYPES))
def test_dumps_loads_round_trip(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6)
    g = loads(dumps(f))
    assert strategy_eq(f, g) and dumps(g) == dumps(f)


@given(seeds, st.sampled_from(GEN_TYPES))
def test_identity_laws(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6, dom_len=1)
    a = f.dom[0]
    assert compose([der(a, 3)], f) == f
    assert compose([f], der(f.cod, 3), dom=f.dom) == f
    assert identity(a, 3) == der(a, 3)


@given(seeds, st.sampled_from(GEN_TYPES))
def test_classification_matches_semantics(seed, t):
    f = random_strategy(random.Random(seed), t, 3, 6, dom_len=1)
    c = classify(f)
    assert c.strict == is_strict_semantic(f)
    assert c.total == (c.strict and not f.is_bottom())


@given(seeds)
def test_weaken_ignores_new_component(seed):
    f = random_strategy(random.Random(seed), NAT_NAT, 3, 6, dom_len=1)
    g = weaken(f, (HO,))
    assert g.dom == (HO,) + f.dom
    assert compose([proj(g.dom, 1, 3)], f, dom=g.dom) == g


def test_bottom_is_least():
    f = der(NAT, 3)
    assert leq(bottom((NAT,), NAT, 3), f)
    assert leq(f, f)
