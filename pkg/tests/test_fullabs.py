import random

from hypothesis import given, settings, strategies as st

from pcfgames.denotation import denote
from pcfgames.fullabs import (
    RelatedUpToBounds, Separated, coherence, intrinsic_leq, obs_compare, observe,
)
from pcfgames.fullabs import tests as enumerate_tests
from pcfgames.generators import random_term
from pcfgames.syntax import NAT, App, show

from helpers import NAT_NAT, P


def test_reflexive():
    m = P("\\x:nat. case[2] x 1 0")
    f = denote(m, window=3)
    assert isinstance(intrinsic_leq(f, f, 3), RelatedUpToBounds)
    assert isinstance(obs_compare(m, m, 3, window=3), RelatedUpToBounds)


def test_constants_separated():
    f, g = denote(P("\\x:nat. 0"), window=3), denote(P("\\x:nat. 1"), window=3)
    v = intrinsic_leq(f, g, 3)
    assert isinstance(v, Separated) and v.value == 0
    # the witness replays
    assert observe(v.witness, f) == 0 and observe(v.witness, g) != 0


def test_omega_below_everything():
    om, zero = P("\\x:nat. omega"), P("\\x:nat. 0")
    assert isinstance(obs_compare(om, zero, 3, window=3), RelatedUpToBounds)
    v = obs_compare(zero, om, 3, window=3)
    assert isinstance(v, Separated)
    assert show(v.witness) and v.value == 0


def test_tests_are_sorted_by_norm():
    ts = enumerate_tests(NAT_NAT, 3, 2)
    assert [len(a) for a in ts] == sorted(len(a) for a in ts)


def test_coherence_on_strict_pair():
    rec = coherence(P("\\x:nat. case[1] x 0"), P("\\x:nat. case[2] x 0 0"), 3, window=3)
    assert rec.ok, rec.note


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_coherence_random_pairs(seed):
    rng = random.Random(seed)
    m = random_term(rng, NAT_NAT, 2, depth=2)
    n = random_term(rng, NAT_NAT, 2, depth=2)
    rec = coherence(m, n, 3, window=2)
    assert rec.ok, rec.note
