"""Evaluation trees, finite approximants and extraction of PCF terms.

An evaluation tree is the PCF analogue of a Bohm tree: under a block of
lambdas, either nothing happens (``Bottom``), a numeral is returned
(``Leaf``), or a variable is called on argument trees and the computation
continues by cases on its result (``Node``).  Variables are identified by
de Bruijn *levels*: the i-th variable bound on the way down is ``x{i}``.

Two independent routes produce trees: :func:`tree_of_strategy` reads them off
a strategy by repeated decomposition, and :func:`tree_of_term` computes them
by head reduction on syntax alone.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .arena import flat_type
from .decomposition import Bot, Const, Total, assemble, decompose, recompose
from .strategy import DEFAULT_BUDGET, Strategy, bottom
from .syntax import (
    NAT, OMEGA, App, Arrow, CaseK, Lam, Nat, Num, Omega, Term, Type, Var, Y,
    apply, lams, parse_type, spine, subst, typecheck, uncurry_type,
)


# ---------------------------------------------------------------------------
# Trees

@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Cut:
    """Depth or reduction budget ran out with structure remaining."""


@dataclass(frozen=True)
class Leaf:
    binders: tuple
    n: int


@dataclass(frozen=True)
class Node:
    binders: tuple
    head: int                  # 1-based level of the called variable
    args: tuple
    branches: Mapping[int, "EvalTree"] = field(default_factory=dict)

    def __hash__(self):
        return hash((self.binders, self.head, self.args, tuple(sorted(self.branches.items()))))


EvalTree = Bottom | Cut | Leaf | Node
BOTTOM = Bottom()
CUT = Cut()


def _binders(types, start: int) -> tuple:
    return tuple((f"x{start + n + 1}", t) for n, t in enumerate(types))


def has_cut(t: EvalTree) -> bool:
    if isinstance(t, Cut):
        return True
    if isinstance(t, Node):
        return any(map(has_cut, t.args)) or any(map(has_cut, t.branches.values()))
    return False


def tree_depth(t: EvalTree) -> int:
    if isinstance(t, Leaf):
        return 1
    if isinstance(t, Node):
        subs = list(t.args) + list(t.branches.values())
        return 1 + max((tree_depth(s) for s in subs), default=0)
    return 0


def max_branch_index(t: EvalTree) -> int:
    """Largest branch label anywhere in the tree (-1 if none)."""
    if not isinstance(t, Node):
        return -1
    best = max(t.branches, default=-1)
    for s in list(t.args) + list(t.branches.values()):
        best = max(best, max_branch_index(s))
    return best


# -- text form ----------------------------------------------------------

def show_tree(t: EvalTree) -> str:
    if isinstance(t, Bottom):
        return "bot"
    if isinstance(t, Cut):
        return "cut"
    bs = "[" + ", ".join(f"{n}:{ty}" for n, ty in t.binders) + "]"
    if isinstance(t, Leaf):
        return f"(leaf {bs} {t.n})"
    args = " ".join(show_tree(a) for a in t.args)
    brs = " ".join(f"({n} {show_tree(b)})" for n, b in sorted(t.branches.items()))
    return f"(node {bs} {t.head} (args{' ' + args if args else ''}) (branches{' ' + brs if brs else ''}))"


class TreeSyntaxError(ValueError):
    pass


def parse_tree(text: str) -> EvalTree:
    toks = re.findall(r"\(|\)|\[[^\]]*\]|[^\s()\[\]]+", text)
    pos = 0

    def take(expect=None):
        nonlocal pos
        if pos >= len(toks):
            raise TreeSyntaxError("unexpected end of tree")
        tok = toks[pos]
        if expect is not None and tok != expect:
            raise TreeSyntaxError(f"expected {expect!r}, got {tok!r}")
        pos += 1
        return tok

    def binders(tok):
        inner = tok[1:-1].strip()
        if not inner:
            return ()
        out = []
        # types may contain commas only inside brackets, which they never do
        for part in inner.split(","):
            name, _, ty = part.partition(":")
            out.append((name.strip(), parse_type(ty)))
        return tuple(out)

    def tree():
        tok = take()
        if tok == "bot":
            return BOTTOM
        if tok == "cut":
            return CUT
        if tok != "(":
            raise TreeSyntaxError(f"unexpected {tok!r}")
        kind = take()
        bs = binders(take())
        if kind == "leaf":
            n = int(take())
            take(")")
            return Leaf(bs, n)
        if kind != "node":
            raise TreeSyntaxError(f"unknown tree form {kind!r}")
        head = int(take())
        take("(")
        take("args")
        args = []
        while toks[pos] != ")":
            args.append(tree())
        take(")")
        take("(")
        take("branches")
        brs = {}
        while toks[pos] != ")":
            take("(")
            n = int(take())
            brs[n] = tree()
            take(")")
        take(")")
        take(")")
        return Node(bs, head, tuple(args), brs)

    t = tree()
    if pos != len(toks):
        raise TreeSyntaxError("trailing input after tree")
    return t


# ---------------------------------------------------------------------------
# Strategies <-> trees

def tree_of_strategy(f: Strategy, depth_bound: int = 64) -> EvalTree:
    """Evaluation tree of ``f`` (a point, or a map out of its whole context)."""
    return _tree_of_strategy(f, 0, depth_bound)


def _tree_of_strategy(f: Strategy, scope: int, depth: int) -> EvalTree:
    args, _ = uncurry_type(f.ftype)
    if f.is_bottom():
        return BOTTOM
    if depth <= 0:
        return CUT
    bs = _binders(args[scope:], scope)
    d = decompose(f)
    if isinstance(d, Const):
        return Leaf(bs, d.x)
    k = len(args)
    sub_args = tuple(_tree_of_strategy(g, k, depth - 1) for g in d.args)
    brs = {n: _tree_of_strategy(h, k, depth - 1) for n, h in d.branches.items()}
    return Node(bs, d.i, sub_args, brs)


def strategy_of_tree(t: EvalTree, ftype: Type, window: int, route: str = "compose",
                     budget: int = DEFAULT_BUDGET) -> Strategy:
    """Fold the tree back into a strategy at ``ftype``.

    ``route="compose"`` rebuilds every node categorically; ``"direct"`` uses
    the direct reading's inverse.
    """
    build = recompose if route == "compose" else assemble
    args, base = uncurry_type(ftype)
    if isinstance(t, Cut):
        raise ValueError("cannot rebuild a strategy from a cut tree")
    if isinstance(t, Bottom):
        return bottom(args, base, window)
    if isinstance(t, Leaf):
        return build(Const(t.n), ftype, window)
    hargs, _ = uncurry_type(args[t.head - 1])
    if len(hargs) != len(t.args):
        raise ValueError(f"head x{t.head} takes {len(hargs)} arguments")
    g = tuple(strategy_of_tree(a, flat_type(args, b), window, route, budget)
              for a, b in zip(t.args, hargs))
    h = {n: strategy_of_tree(b, ftype, window, route, budget)
         for n, b in t.branches.items() if not isinstance(b, Bottom)}
    if route == "compose":
        return recompose(Total(t.head, g, h), ftype, window, budget)
    return assemble(Total(t.head, g, h), ftype, window)


# ---------------------------------------------------------------------------
# The syntactic oracle

def unroll_y(m: Term, k: int) -> Term:
    """Replace every ``Y[T]`` by the Y-free term for its k-th approximant."""
    if isinstance(m, Y):
        return y_term(m.at, k)
    if isinstance(m, Lam):
        return Lam(m.name, m.annotation, unroll_y(m.body, k))
    if isinstance(m, App):
        return App(unroll_y(m.fn, k), unroll_y(m.arg, k))
    return m


def omega_at(t: Type) -> Term:
    args, _ = uncurry_type(t)
    return lams(_binders(args, 0), OMEGA)


def y_term(t: Type, k: int) -> Term:
    """``Y_0 = \\f. omega_T`` and ``Y_{k+1} = \\f. f (Y_k f)``."""
    tt = Arrow(t, t)
    term = Lam("f", tt, omega_at(t))
    for _ in range(k):
        term = Lam("f", tt, App(Var("f"), App(term, Var("f"))))
    return term


def tree_of_term(m: Term, depth_bound: int = 64, window: int = 4,
                 unroll: int | None = None, fuel: int = 200_000) -> EvalTree:
    """Evaluation tree of the closed term ``m``, by head reduction.

    With ``unroll=k`` each ``Y`` stands for its k-th approximant, matching the
    strategy model at the same depth; otherwise ``Y`` is unfolded on demand
    and an exhausted ``fuel`` budget leaves ``Cut`` markers.
    """
    ty = typecheck((), m)
    if unroll is not None:
        m = unroll_y(m, unroll)
    budget = [fuel]
    args, _ = uncurry_type(ty)
    return _eta_tree(m, (), args, depth_bound, window, budget)


def _lvl(i: int) -> Var:
    return Var(f"#{i}")


def _eta_tree(m, scope, new_types, depth, window, budget):
    start = len(scope)
    scope = scope + tuple(new_types)
    body = apply(m, *(_lvl(start + n + 1) for n in range(len(new_types))))
    bs = _binders(new_types, start)
    t = _whnf_tree(body, scope, depth, window, budget, _leaf)
    if isinstance(t, Leaf):
        return Leaf(bs, t.n)
    if isinstance(t, Node):
        return Node(bs, t.head, t.args, t.branches)
    return t


def _leaf(n, depth):
    return Leaf((), n) if depth > 0 else CUT


def _whnf_tree(m, scope, depth, window, budget, k: Callable):
    """Tree of the nat-typed open term ``m``; numerals go to continuation ``k``."""
    while True:
        head, args = spine(m)
        if isinstance(head, Lam) and args:
            if budget[0] <= 0:
                return CUT
            budget[0] -= 1
            m = apply(subst(head.body, head.name, args[0]), *args[1:])
            continue
        if isinstance(head, Y) and args:
            if budget[0] <= 0:
                return CUT
            budget[0] -= 1
            m = apply(App(args[0], App(head, args[0])), *args[1:])
            continue
        if isinstance(head, Num):
            return k(head.n, depth)
        if isinstance(head, Omega):
            return BOTTOM
        if isinstance(head, CaseK):
            nb = head.k
            scrut, branches = args[0], args[1:]

            def kk(n, d, branches=branches, nb=nb):
                if n >= nb:
                    return BOTTOM
                return _whnf_tree(branches[n], scope, d, window, budget, k)

            return _whnf_tree(scrut, scope, depth, window, budget, kk)
        if isinstance(head, Var) and head.name.startswith("#"):
            if depth <= 0:
                return CUT
            i = int(head.name[1:])
            hargs, base = uncurry_type(scope[i - 1])
            sub = tuple(_eta_tree(a, scope, uncurry_type(b)[0], depth - 1, window, budget)
                        for a, b in zip(args, hargs))
            brs = {}
            if isinstance(base, Nat):
                for n in range(window):
                    b = k(n, depth - 1)
                    if not isinstance(b, Bottom):
                        brs[n] = b
            return Node((), i, sub, brs)
        raise ValueError(f"cannot head-reduce {m!r}")


# ---------------------------------------------------------------------------
# Approximants and extraction

def approximant(f: Strategy, k: int) -> Strategy:
    """``p_k(f)``: arguments cut at ``p_{k-1}``, branches kept only below ``k-1``."""
    args, base = uncurry_type(f.ftype)
    if k <= 0:
        return bottom(args, base, f.window)
    d = decompose(f)
    if not isinstance(d, Total):
        return assemble(d, f.ftype, f.window)
    g = tuple(approximant(a, k - 1) for a in d.args)
    h = {n: approximant(b, k - 1) for n, b in d.branches.items() if n < k - 1}
    h = {n: b for n, b in h.items() if not b.is_bottom()}
    return assemble(Total(d.i, g, h), f.ftype, f.window)


def _xs(args) -> list[Var]:
    return [Var(f"x{n + 1}") for n in range(len(args))]


def extract_term(f: Strategy) -> Term:
    """A closed PCF term denoting ``f``."""
    args, base = uncurry_type(f.ftype)
    bs = _binders(args, 0)
    xs = _xs(args)
    d = decompose(f)
    if isinstance(d, Bot):
        return lams(bs, OMEGA)
    if isinstance(d, Const):
        return lams(bs, Num(d.x))
    call = apply(xs[d.i - 1], *(apply(extract_term(g), *xs) for g in d.args))
    if not isinstance(base, Nat):
        return lams(bs, call)
    width = 1 + max(d.branches, default=-1)
    branches = [apply(extract_term(d.branches[n]), *xs) if n in d.branches else OMEGA
                for n in range(width)]
    return lams(bs, apply(CaseK(width), call, *branches))


def extract_term_pk(f: Strategy, k: int) -> Term:
    """The term for ``p_k(f)``, built with ``case_{k-1}`` at every node."""
    args, base = uncurry_type(f.ftype)
    bs = _binders(args, 0)
    xs = _xs(args)
    if k <= 0:
        return lams(bs, OMEGA)
    d = decompose(f)
    if isinstance(d, Bot):
        return lams(bs, OMEGA)
    if isinstance(d, Const):
        return lams(bs, Num(d.x))
    call = apply(xs[d.i - 1], *(apply(extract_term_pk(g, k - 1), *xs) for g in d.args))
    branches = [apply(extract_term_pk(d.branches[n], k - 1), *xs) if n in d.branches else OMEGA
                for n in range(k - 1)]
    return lams(bs, apply(CaseK(k - 1), call, *branches))


def stabilization_bound(f: Strategy) -> int:
    """Least ``k`` with ``p_k(f) = f``, computed from the evaluation tree."""
    return _need(tree_of_strategy(f))


def _need(t: EvalTree) -> int:
    if isinstance(t, Bottom):
        return 0
    if isinstance(t, Leaf):
        return 1
    if isinstance(t, Cut):
        raise ValueError("tree is not fully expanded")
    k = 1
    for a in t.args:
        k = max(k, 1 + _need(a))
    for n, b in t.branches.items():
        k = max(k, n + 2, 1 + _need(b))
    return k


def truncate_tree(t: EvalTree, k: int) -> EvalTree:
    """The tree of ``p_k``, computed on trees."""
    if k <= 0 or isinstance(t, Bottom):
        return BOTTOM
    if isinstance(t, (Leaf, Cut)):
        return t
    args = tuple(truncate_tree(a, k - 1) for a in t.args)
    brs = {n: truncate_tree(b, k - 1) for n, b in t.branches.items() if n < k - 1}
    return Node(t.binders, t.head, args, {n: b for n, b in brs.items() if not isinstance(b, Bottom)})
