import random

import pytest
from hypothesis import given, strategies as st

from pcfgames.denotation import (
    ApproxDenotation, DenotationError, adequacy_check, denote, fix, y_approx,
)
from pcfgames.generators import random_term
from pcfgames.operational import Converges, evaluate
from pcfgames.strategy import apply_value, compose, leq, norm, point
from pcfgames.syntax import NAT, App

from helpers import NAT_NAT, P, T


def test_numeral_and_omega():
    assert denote(P("2"), window=3) == point(2, 3)
    assert denote(P("omega"), window=3).is_bottom()


def test_numeral_outside_window():
    with pytest.raises(DenotationError):
        denote(P("5"), window=4)


def test_beta_invariance():
    assert denote(P("(\\x:nat. \\y:nat. x) 1"), window=3) == denote(P("\\y:nat. 1"), window=3)


def test_eta_invariance():
    assert denote(P("\\f:nat->nat. \\x:nat. f x"), window=3) == denote(P("\\f:nat->nat. f"), window=3)


def test_y_chain_is_increasing():
    t = T("nat -> nat")
    prev = None
    for k in range(5):
        cur = y_approx(t, k, 3)
        if prev is not None:
            assert leq(prev, cur)
        prev = cur


def test_fix_countdown():
    body = denote(P("\\f:nat->nat. \\n:nat. case[3] n 0 (f 0) (f 1)"), window=3)
    assert apply_value([point(2, 3)], fix(body, 2).uncurried()) is None
    assert apply_value([point(2, 3)], fix(body, 3).uncurried()) == 0


def test_approx_denotation_caches():
    chain = ApproxDenotation(P("Y[nat] (\\x:nat. 1)"), (), 3)
    assert chain.at(0).is_bottom()
    assert chain.at(1) == point(1, 3)


def test_adequacy_needs_nat():
    with pytest.raises(DenotationError):
        adequacy_check(P("\\x:nat. x"))


def test_adequacy_report_fields():
    rep = adequacy_check(P("Y[nat->nat] (\\f:nat->nat. \\n:nat. case[4] n 0 (f 0) (f 1) (f 2)) 3"))
    assert rep.agree and rep.value == 0 and rep.first_k == 4 and rep.converged


@given(st.integers(0, 10**6))
def test_adequacy_random_programs(seed):
    m = random_term(random.Random(seed), NAT, 4, depth=3, allow_y=True)
    rep = adequacy_check(m, k_max=12)
    op = evaluate(m)
    if isinstance(op, Converges) or rep.value is not None:
        assert rep.agree


@given(st.integers(0, 10**6))
def test_compositionality_of_application(seed):
    rng = random.Random(seed)
    f = random_term(rng, NAT_NAT, 3, depth=2)
    a = random_term(rng, NAT, 3, depth=2)
    lhs = denote(App(f, a), window=3)
    rhs = compose([denote(a, window=3)], denote(f, window=3).with_dom((NAT,)), dom=())
    assert lhs == rhs
