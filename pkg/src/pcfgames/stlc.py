"""Full completeness for the pure simply-typed lambda calculus over iota.

At pure types every map into iota is strict and iota has no answers, so a
total strategy decomposes as a head call with argument strategies only.
Reading that decomposition recursively yields a long beta-eta normal form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .arena import arena_of_type
from .decomposition import Bot, Total, assemble, decompose, recompose
from .denotation import denote
from .generators import _o_views, legal_responses
from .strategy import Strategy, dumps, norm
from .syntax import (
    App, Arrow, Iota, Lam, Term, Type, Var, alpha_eq, apply, lams,
    show, term_size, typecheck, uncurry_type,
)

PURE_WINDOW = 1


class NotTotal(ValueError):
    pass


class NormBreach(AssertionError):
    """An argument strategy was not strictly smaller than its parent."""


def is_pure_type(t: Type) -> bool:
    if isinstance(t, Iota):
        return True
    return isinstance(t, Arrow) and is_pure_type(t.domain) and is_pure_type(t.codomain)


@dataclass(frozen=True)
class PureDecomposition:
    head: int
    args: tuple


def stlc_decompose(f: Strategy) -> PureDecomposition:
    if not is_pure_type(f.ftype):
        raise ValueError(f"{f.ftype} is not a pure type")
    d = decompose(f)
    if isinstance(d, Bot):
        raise NotTotal("bottom is not total" if uncurry_type(f.ftype)[0]
                       else "no total strategy exists at iota")
    assert isinstance(d, Total) and not d.branches
    for g in d.args:
        if norm(g) >= norm(f):
            raise NormBreach(f"argument norm {norm(g)} >= {norm(f)}")
    return PureDecomposition(d.i, d.args)


def stlc_recompose(d: PureDecomposition, t: Type, route: str = "compose") -> Strategy:
    total = Total(d.head, d.args, {})
    if route == "compose":
        return recompose(total, t, PURE_WINDOW)
    return assemble(total, t, PURE_WINDOW)


def stlc_extract_nf(f: Strategy) -> Term:
    """The long beta-eta normal form denoting the total strategy ``f``."""
    return _nf(f, 0)


def _nf(f: Strategy, scope: int) -> Term:
    args, _ = uncurry_type(f.ftype)
    d = stlc_decompose(f)
    bs = tuple((f"x{scope + n + 1}", a) for n, a in enumerate(args[scope:]))
    k = len(args)
    body = apply(Var(f"x{d.head}"), *(_nf(g, k) for g in d.args))
    return lams(bs, body)


def denote_pure(m: Term) -> Strategy:
    return denote(m, (), 0, PURE_WINDOW)


def is_long_normal(m: Term, ctx: dict | None = None) -> bool:
    """beta-normal and eta-long: every variable occurrence is fully applied at iota."""
    ctx = dict(ctx or {})
    while isinstance(m, Lam):
        ctx[m.name] = m.annotation
        m = m.body
    head = m
    args = []
    while isinstance(head, App):
        args.append(head.arg)
        head = head.fn
    args.reverse()
    if not isinstance(head, Var) or head.name not in ctx:
        return False
    hargs, base = uncurry_type(ctx[head.name])
    if len(args) != len(hargs) or not isinstance(base, Iota):
        return False
    for a, ty in zip(args, hargs):
        if not is_long_normal(a, ctx):
            return False
        # an argument of type B must be eta-expanded to B's arity
        depth, inner = 0, a
        while isinstance(inner, Lam):
            depth += 1
            inner = inner.body
        if depth != len(uncurry_type(ty)[0]):
            return False
    return True


# ---------------------------------------------------------------------------
# Enumeration

def normal_forms(t: Type, size_bound: int) -> list[Term]:
    """Long beta-eta normal forms of closed type ``t`` with at most ``size_bound`` nodes."""
    out = []
    for s in range(1, size_bound + 1):
        out += sorted(_nfs((), t, s), key=show)
    return out


@lru_cache(maxsize=None)
def _nfs(ctx: tuple, t: Type, size: int) -> tuple[Term, ...]:
    args, _ = uncurry_type(t)
    inner = size - len(args)
    if inner < 1:
        return ()
    start = len(ctx)
    bs = tuple((f"x{start + n + 1}", a) for n, a in enumerate(args))
    ctx2 = ctx + tuple(args)
    found = []
    for i, vt in enumerate(ctx2):
        hargs, _ = uncurry_type(vt)
        # head variable and one application node per argument
        rest = inner - 1 - len(hargs)
        if rest < 0:
            continue
        for parts in _spread(ctx2, hargs, rest):
            body = apply(Var(f"x{i + 1}"), *parts)
            found.append(lams(bs, body))
    return tuple(found)


def _spread(ctx, types, budget) -> Iterator[tuple]:
    if not types:
        if budget == 0:
            yield ()
        return
    first, more = types[0], types[1:]
    for s in range(1, budget + 1):
        for a in _nfs(ctx, first, s):
            for tail in _spread(ctx, more, budget - s):
                yield (a,) + tail


def total_strategies(t: Type, norm_bound: int) -> list[Strategy]:
    """Strategies at pure ``t`` responding at every reachable view, norm bounded."""
    ar = arena_of_type(t, PURE_WINDOW)
    args, base = uncurry_type(t)
    found = []
    vf: dict = {}

    def rec(frontier):
        if not frontier:
            found.append(Strategy(args, base, PURE_WINDOW, vf))
            return
        if len(vf) >= norm_bound:
            return
        key, rest = frontier[0], frontier[1:]
        for r in legal_responses(ar, key):
            vf[key] = r
            rec(rest + tuple(_o_views(ar, key, r)))
            del vf[key]

    rec(((0, -1),))
    found.sort(key=lambda s: (len(s), dumps(s)))
    return found


# ---------------------------------------------------------------------------

@dataclass
class CompletenessReport:
    type: str
    normal_forms: int
    strategies: int
    injective: bool
    nf_roundtrip: bool
    strategy_roundtrip: bool
    surjective: bool
    norm_descent: bool
    long_normal: bool
    boundary: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.injective and self.nf_roundtrip and self.strategy_roundtrip
                and self.surjective and self.norm_descent and self.long_normal)


def check_full_completeness(t: Type, nf_size_bound: int, norm_bound: int) -> CompletenessReport:
    nfs = normal_forms(t, nf_size_bound)
    strats = total_strategies(t, norm_bound)
    rep = CompletenessReport(str(t), len(nfs), len(strats), True, True, True, True, True, True)
    dens = {}
    for m in nfs:
        typecheck((), m)
        s = denote_pure(m)
        if s in dens:
            rep.injective = False
            rep.failures.append(f"{show(m)} and {show(dens[s])} have the same denotation")
        dens[s] = m
        try:
            back = stlc_extract_nf(s)
        except NormBreach as e:
            rep.norm_descent = False
            rep.failures.append(f"norm breach extracting {show(m)}: {e}")
            continue
        if not alpha_eq(back, m):
            rep.nf_roundtrip = False
            rep.failures.append(f"extract(denote({show(m)})) = {show(back)}")
    for s in strats:
        try:
            m = stlc_extract_nf(s)
        except NormBreach as e:
            rep.norm_descent = False
            rep.failures.append(str(e))
            continue
        if not is_long_normal(m):
            rep.long_normal = False
            rep.failures.append(f"{show(m)} is not a long normal form")
        if denote_pure(m) != s:
            rep.strategy_roundtrip = False
            rep.failures.append(f"denote(extract(f)) != f for {show(m)}")
        if s not in dens:
            if term_size(m) > nf_size_bound:
                rep.boundary.append(show(m))
            else:
                rep.surjective = False
                rep.failures.append(f"no enumerated normal form denotes {show(m)}")
    return rep
