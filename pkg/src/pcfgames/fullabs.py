"""Bounded comparison of strategies and terms by enumerated tests.

The intrinsic preorder puts ``f <= g`` when every test ``alpha : T -> N``
that sends ``f`` to a numeral sends ``g`` to the same numeral.  The
observational preorder does the same with program contexts; here the
contexts are the terms extracted from the very same tests, so the two sides
can be cross-checked verdict by verdict.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .arena import flat_type
from .definability import extract_term
from .denotation import denote
from .generators import enumerate_sorted
from .operational import DEFAULT_FUEL, Converges, evaluate
from .strategy import ShapeError, Strategy, apply_value
from .syntax import NAT, App, Term, Type, show, typecheck


@dataclass(frozen=True)
class RelatedUpToBounds:
    tests_tried: int


@dataclass(frozen=True)
class Separated:
    witness: object            # a Strategy test or a Term context
    value: int
    index: int                 # position of the witness in the enumeration


Verdict = RelatedUpToBounds | Separated


@lru_cache(maxsize=64)
def tests(t: Type, norm_bound: int, window: int) -> tuple[Strategy, ...]:
    """All tests ``t -> N`` of norm at most ``norm_bound``, in canonical order."""
    return tuple(enumerate_sorted(flat_type((t,), NAT), window, norm_bound, dom_len=1))


@lru_cache(maxsize=64)
def test_terms(t: Type, norm_bound: int, window: int) -> tuple[Term, ...]:
    return tuple(extract_term(a) for a in tests(t, norm_bound, window))


def observe(alpha: Strategy, f: Strategy) -> int | None:
    """The numeral ``alpha o f`` (or None for bottom)."""
    return apply_value([f.as_point()], alpha, dom=())


def intrinsic_leq(f: Strategy, g: Strategy, norm_bound: int = 5) -> Verdict:
    """Search for a test sending ``f`` to a numeral and ``g`` elsewhere."""
    if f.ftype != g.ftype or f.window != g.window:
        raise ShapeError("intrinsic comparison needs points of the same type")
    alphas = tests(f.ftype, norm_bound, f.window)
    for n, alpha in enumerate(alphas):
        v = observe(alpha, f)
        if v is not None and observe(alpha, g) != v:
            return Separated(alpha, v, n)
    return RelatedUpToBounds(len(alphas))


def _run(p: Term, fuel: int) -> int | None:
    out = evaluate(p, fuel)
    return out.n if isinstance(out, Converges) else None


def obs_compare(m: Term, n: Term, norm_bound: int = 5, fuel: int = DEFAULT_FUEL,
                window: int = 4) -> Verdict:
    """Search for an extracted context ``P`` with ``P m`` converging and ``P n`` not."""
    t = typecheck((), m)
    if typecheck((), n) != t:
        raise ShapeError("terms of different types")
    ps = test_terms(t, norm_bound, window)
    for idx, p in enumerate(ps):
        v = _run(App(p, m), fuel)
        if v is not None and _run(App(p, n), fuel) != v:
            return Separated(p, v, idx)
    return RelatedUpToBounds(len(ps))


@dataclass
class CoherenceRecord:
    left: str
    right: str
    intrinsic: Verdict
    observational: Verdict
    ok: bool
    note: str = ""


def coherence(m: Term, n: Term, norm_bound: int = 5, fuel: int = DEFAULT_FUEL,
              window: int = 4, unroll: int = 16) -> CoherenceRecord:
    """Compare ``m`` and ``n`` both ways and cross-check every separation.

    An intrinsic separator ``alpha`` must separate ``extract_term(alpha)``
    operationally, and an operational separator ``P`` must separate
    ``denote(P)`` intrinsically.
    """
    f = denote(m, unroll=unroll, window=window)
    g = denote(n, unroll=unroll, window=window)
    iv = intrinsic_leq(f, g, norm_bound)
    ov = obs_compare(m, n, norm_bound, fuel, window)
    notes = []
    if isinstance(iv, Separated):
        p = extract_term(iv.witness)
        a, b = _run(App(p, m), fuel), _run(App(p, n), fuel)
        if a != iv.value or b == iv.value:
            notes.append("intrinsic separator does not separate operationally")
    if isinstance(ov, Separated):
        alpha = denote(ov.witness, window=window).with_dom((f.ftype,))
        a, b = observe(alpha, f), observe(alpha, g)
        if a != ov.value or b == ov.value:
            notes.append("operational separator does not separate intrinsically")
    if type(iv) is not type(ov):
        notes.append("verdicts differ")
    elif isinstance(iv, Separated) and (iv.index, iv.value) != (ov.index, ov.value):
        notes.append("first separators differ")
    return CoherenceRecord(show(m), show(n), iv, ov, not notes, "; ".join(notes))


def coherence_suite(pairs: Iterable[tuple[Term, Term]], **kw) -> list[CoherenceRecord]:
    return [coherence(m, n, **kw) for m, n in pairs]
