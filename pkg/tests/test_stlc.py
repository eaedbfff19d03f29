import pytest
from hypothesis import given, strategies as st

from pcfgames.stlc import (
    NotTotal, PureDecomposition, check_full_completeness, denote_pure, is_long_normal,
    is_pure_type, normal_forms, stlc_decompose, stlc_extract_nf, stlc_recompose,
    total_strategies,
)
from pcfgames.syntax import alpha_eq, term_size

from helpers import P, T


def test_pure_type_check():
    assert is_pure_type(T("(iota->iota)->iota"))
    assert not is_pure_type(T("nat->nat"))


def test_church_numerals():
    nfs = normal_forms(T("(iota->iota)->iota->iota"), 7)
    assert len(nfs) == 3
    assert alpha_eq(nfs[0], P("\\f:iota->iota. \\x:iota. x"))


def test_iota_is_empty():
    assert normal_forms(T("iota"), 9) == []
    assert total_strategies(T("iota"), 4) == []


def test_bottom_is_not_total():
    from pcfgames.strategy import bottom
    with pytest.raises(NotTotal):
        stlc_decompose(bottom((T("iota"),), T("iota"), 1))


def test_decompose_and_recompose():
    f = denote_pure(P("\\f:iota->iota. \\x:iota. f x"))
    d = stlc_decompose(f)
    assert d.head == 1 and len(d.args) == 1
    assert stlc_recompose(d, f.ftype) == f == stlc_recompose(d, f.ftype, route="direct")


def test_long_normal_detection():
    assert is_long_normal(P("\\f:iota->iota. \\x:iota. f x"))
    assert not is_long_normal(P("\\f:iota->iota. f"))


@pytest.mark.parametrize("ty,size,count", [
    ("iota->iota", 3, 1),
    ("(iota->iota)->iota->iota", 7, 3),
    ("iota->iota->iota", 4, 2),
])
def test_completeness_small(ty, size, count):
    rep = check_full_completeness(T(ty), size, 4)
    assert rep.ok, rep.failures
    assert rep.normal_forms == count


@given(st.sampled_from(["iota->iota->iota", "(iota->iota)->iota->iota", "((iota->iota)->iota)->iota"]),
       st.integers(1, 9))
def test_normal_forms_round_trip(ty, size):
    for m in normal_forms(T(ty), size):
        assert term_size(m) <= size and is_long_normal(m)
        assert alpha_eq(stlc_extract_nf(denote_pure(m)), m)
