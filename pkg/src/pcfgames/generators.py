"""Random and exhaustive generation of compact innocent strategies.

Both generators grow a view function one P-view at a time.  At a P-view the
legal responses are: an answer to the pending question (when Opponent asked
it), or a question enabled by some Opponent question in the view.  Every
strategy produced is therefore innocent, well-bracketed and reachable.
"""
from __future__ import annotations

import random
from typing import Callable, Iterator

from .arena import Arena, arena_of_type, flat_type
from .strategy import Strategy, dumps
from .syntax import (
    NAT, OMEGA, App, CaseK, Lam, Num, Type, Var, Y, apply, arrow, lams, uncurry_type,
)

Filter = Callable[[Arena, tuple, tuple], bool]


def legal_responses(ar: Arena, key: tuple) -> list[tuple[int, int]]:
    """Responses that extend the P-view ``key`` legally, in a fixed order."""
    n = len(key) // 2
    moves = key[0::2]
    answered = set()
    for t in range(n):
        if not ar.is_question(moves[t]):
            answered.add(key[2 * t + 1])
    pending = -1
    for t in range(n - 1, -1, -1):
        if ar.is_question(moves[t]) and t not in answered:
            pending = t
            break
    out = []
    if pending >= 0 and ar.is_opponent[moves[pending]]:
        out += [(a, pending) for a in ar.answers[moves[pending]]]
    for t in range(0, n, 2):
        m = moves[t]
        if ar.is_question(m):
            out += [(c, t) for c in ar.children[m]]
    return out


def _o_views(ar: Arena, key: tuple, resp: tuple) -> list[tuple]:
    pkey = key + resp
    L = len(pkey) // 2
    return [pkey + (m, L - 1) for m in ar.o_moves[resp[0]]]


def split_of(ftype: Type, dom_len: int):
    args, base = uncurry_type(ftype)
    return tuple(args[:dom_len]), flat_type(tuple(args[dom_len:]), base)


def random_strategy(rng: random.Random, ftype: Type, window: int, max_norm: int,
                    dom_len: int | None = None, p_undef: float = 0.25,
                    root: str = "any", allow: Filter | None = None) -> Strategy:
    """A random strategy with at most ``max_norm`` entries.

    ``root`` constrains the first response: ``"any"`` (possibly bottom),
    ``"total"`` (a question in the domain) or ``"defined"`` (anything but
    bottom).  ``allow(arena, view, response)`` can veto individual responses.
    """
    ar = arena_of_type(ftype, window)
    if dom_len is None:
        dom_len = len(uncurry_type(ftype)[0])
    vf: dict = {}
    frontier = [(0, -1)]
    first = True
    while frontier and len(vf) < max_norm:
        key = frontier.pop(rng.randrange(len(frontier)))
        opts = legal_responses(ar, key)
        if allow is not None:
            opts = [r for r in opts if allow(ar, key, r)]
        if first:
            first = False
            if root == "total":
                opts = [r for r in opts if ar.path[r[0]] and ar.path[r[0]][0] <= dom_len]
            if root == "any" and rng.random() < p_undef / 2:
                continue
        elif rng.random() < p_undef:
            continue
        if not opts:
            continue
        r = _pick(rng, ar, opts)
        vf[key] = r
        frontier.extend(_o_views(ar, key, r))
    dom, cod = split_of(ftype, dom_len)
    return Strategy(dom, cod, window, vf)


def _pick(rng, ar, opts):
    # choose between answering and asking first, so answers do not crowd out questions
    answers = [r for r in opts if not ar.is_question(r[0])]
    questions = [r for r in opts if ar.is_question(r[0])]
    if answers and questions:
        return rng.choice(answers if rng.random() < 0.5 else questions)
    return rng.choice(opts)


def enumerate_strategies(ftype: Type, window: int, max_norm: int,
                         dom_len: int | None = None,
                         allow: Filter | None = None) -> Iterator[Strategy]:
    """Every strategy at ``ftype`` with norm at most ``max_norm`` (unordered)."""
    ar = arena_of_type(ftype, window)
    if dom_len is None:
        dom_len = len(uncurry_type(ftype)[0])
    dom, cod = split_of(ftype, dom_len)
    vf: dict = {}

    def rec(frontier):
        if not frontier:
            yield Strategy(dom, cod, window, vf)
            return
        key, rest = frontier[0], frontier[1:]
        yield from rec(rest)
        if len(vf) >= max_norm:
            return
        for r in legal_responses(ar, key):
            if allow is not None and not allow(ar, key, r):
                continue
            vf[key] = r
            yield from rec(rest + tuple(_o_views(ar, key, r)))
            del vf[key]

    yield from rec(((0, -1),))


def enumerate_sorted(ftype: Type, window: int, max_norm: int,
                     dom_len: int | None = None,
                     allow: Filter | None = None) -> list[Strategy]:
    """As :func:`enumerate_strategies`, ordered by norm then serialized form."""
    found = list(enumerate_strategies(ftype, window, max_norm, dom_len, allow))
    found.sort(key=lambda s: (len(s), dumps(s)))
    return found


# ---------------------------------------------------------------------------
# Terms

def random_term(rng: random.Random, t: Type, window: int, depth: int = 4,
                allow_y: bool = False, p_omega: float = 0.05):
    """A random closed term of type ``t`` using numerals below ``window``.

    Mixes head-variable applications, case splits, beta redexes and (with
    ``allow_y``) recursive definitions, so it exercises more than the
    canonical shapes produced by extraction.
    """
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"v{counter[0]}"

    def gen(ctx, ty, d):
        args, _ = uncurry_type(ty)
        if args:
            bs = [(fresh(), a) for a in args]
            return lams(bs, nat_body(ctx + bs, d))
        return nat_body(ctx, d)

    def nat_body(ctx, d):
        heads = [(x, a) for x, a in ctx]
        r = rng.random()
        if d <= 0 or r < 0.15:
            if heads and rng.random() < 0.5:
                return call(ctx, rng.choice(heads), 0)
            return OMEGA if rng.random() < p_omega else Num(rng.randrange(window))
        if r < 0.45 and heads:
            return call(ctx, rng.choice(heads), d - 1)
        if r < 0.7:
            k = rng.randint(1, window)
            return apply(CaseK(k), nat_body(ctx, d - 1),
                         *(nat_body(ctx, d - 1) for _ in range(k)))
        if allow_y and r < 0.88:
            ft = arrow(*([NAT] * rng.randint(0, 2)), NAT)
            f = fresh()
            fix = App(Y(ft), Lam(f, ft, gen(ctx + [(f, ft)], ft, d - 1)))
            fargs, _ = uncurry_type(ft)
            return apply(fix, *(nat_body(ctx, d - 1) for _ in fargs))
        # a beta redex
        a = rng.choice([NAT, arrow(NAT, NAT)])
        x = fresh()
        return App(Lam(x, a, nat_body(ctx + [(x, a)], d - 1)), gen(ctx, a, d - 1))

    def call(ctx, head, d):
        x, a = head
        hargs, _ = uncurry_type(a)
        return apply(Var(x), *(gen(ctx, b, d) for b in hargs))

    return gen([], t, depth)
