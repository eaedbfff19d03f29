"""Interpretation of PCF terms as strategies.

Terms in context ``x1:T1, ..., xk:Tk`` denote maps ``!(T1 x ... x Tk) -> T``.
``Y`` is interpreted by a finite approximant of the fixpoint chain: at
unroll depth ``k`` it is ``Y_k`` with ``Y_0 = bottom`` and
``Y_{k+1} = lambda f. f (Y_k f)``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

from .operational import DEFAULT_FUEL, Converges, Outcome, evaluate
from .strategy import (
    DEFAULT_BUDGET, Strategy, ap, bottom, case_strategy, compose, point, proj, weaken,
)
from .syntax import (
    NAT, App, Arrow, CaseK, Lam, Num, Omega, Term, Type, Var, Y, typecheck,
)

DEFAULT_WINDOW = 4
DEFAULT_UNROLL = 16


class DenotationError(ValueError):
    pass


Context = Sequence[tuple[str, Type]]

_Y_CACHE: dict = {}
_Y_LOCK = threading.Lock()


def y_approx(t: Type, k: int, window: int) -> Strategy:
    """``Y_k`` at type ``t`` as a map ``!(t => t) -> t``."""
    with _Y_LOCK:
        chain = _Y_CACHE.setdefault((t, window), [])
        tt = Arrow(t, t)
        if not chain:
            chain.append(bottom((tt,), t, window))
        while len(chain) <= k:
            prev = chain[-1]
            step = compose([proj((tt,), 0, window), prev], ap(t, t, window), dom=(tt,))
            chain.append(step)
        return chain[k]


def denote(m: Term, ctx: Context = (), unroll: int = DEFAULT_UNROLL,
           window: int = DEFAULT_WINDOW, budget: int = DEFAULT_BUDGET) -> Strategy:
    """The strategy of ``ctx |- m`` with every ``Y`` unrolled ``unroll`` times."""
    ctx = tuple(ctx)
    typecheck(ctx, m)
    return _den(m, ctx, unroll, window, budget)


def _lookup(ctx, name):
    for idx in range(len(ctx) - 1, -1, -1):
        if ctx[idx][0] == name:
            return idx
    raise DenotationError(f"unbound variable {name}")


def _den(m, ctx, unroll, w, budget) -> Strategy:
    types = tuple(t for _, t in ctx)
    if isinstance(m, Var):
        return proj(types, _lookup(ctx, m.name), w)
    if isinstance(m, Lam):
        body = _den(m.body, ctx + ((m.name, m.annotation),), unroll, w, budget)
        return body.with_dom(types)
    if isinstance(m, App):
        fn = _den(m.fn, ctx, unroll, w, budget)
        arg = _den(m.arg, ctx, unroll, w, budget)
        fn = fn.with_dom(types + (_arg_type(fn),))
        projs = [proj(types, i, w) for i in range(len(types))]
        return compose(projs + [arg], fn, dom=types, budget=budget)
    if isinstance(m, Num):
        if m.n >= w:
            raise DenotationError(f"numeral {m.n} does not fit in window {w}")
        return point(m.n, w, types)
    if isinstance(m, Omega):
        return bottom(types, NAT, w)
    if isinstance(m, CaseK):
        return weaken(case_strategy(m.k, w), types)
    if isinstance(m, Y):
        return weaken(y_approx(m.at, unroll, w).as_point(), types)
    raise DenotationError(f"not a term: {m!r}")


def _arg_type(fn: Strategy) -> Type:
    cod = fn.cod
    if not isinstance(cod, Arrow):
        raise DenotationError("application of a non-function")
    return cod.domain


def fix(f: Strategy, k: int) -> Strategy:
    """``f^k o bottom`` for a point ``f`` of ``t => t``."""
    t = f.ftype.domain
    return compose([f.as_point()], y_approx(t, k, f.window), dom=())


@dataclass
class ApproxDenotation:
    """The chain ``k -> denote(term, unroll=k)``, computed on demand."""
    term: Term
    ctx: tuple = ()
    window: int = DEFAULT_WINDOW
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def type(self) -> Type:
        return typecheck(self.ctx, self.term)

    def at(self, k: int) -> Strategy:
        with self._lock:
            hit = self._cache.get(k)
        if hit is None:
            hit = denote(self.term, self.ctx, k, self.window)
            with self._lock:
                self._cache[k] = hit
        return hit

    __call__ = at


@dataclass
class AdequacyReport:
    operational: Outcome
    denotational: list          # strategy at each k <= k_max
    first_k: int | None         # least k at which the denotation is a numeral
    value: int | None
    agree: bool

    @property
    def converged(self) -> bool:
        return isinstance(self.operational, Converges)


def adequacy_check(p: Term, fuel: int = DEFAULT_FUEL, k_max: int = 32,
                   window: int = DEFAULT_WINDOW) -> AdequacyReport:
    """Compare evaluation with the denotations at unroll depths ``0..k_max``."""
    ty = typecheck((), p)
    if ty != NAT:
        raise DenotationError(f"a program has type nat, not {ty}")
    op = evaluate(p, fuel)
    chain = ApproxDenotation(p, (), window)
    dens = [chain.at(k) for k in range(k_max + 1)]
    first_k = value = None
    for k, s in enumerate(dens):
        r = s.first_response()
        if r is not None:
            first_k, value = k, s.arena.value[r[0]]
            break
    if isinstance(op, Converges):
        agree = value is not None and value == op.n
    else:
        agree = value is None
    return AdequacyReport(op, dens, first_k, value, agree)
