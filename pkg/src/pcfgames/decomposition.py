"""Decomposition of strategies into head call, arguments and branches.

A map ``f : !(A_1 x ... x A_k) -> N`` with ``A_i = B_i1 => ... => B_iq => N``
is exactly one of

* ``Bot``: the empty strategy;
* ``Const(x)``: answers the initial question with ``x`` at once;
* ``Total(i, args, branches)``: calls argument ``i``, feeds it the argument
  strategies ``g_j : !A -> B_ij`` and continues with ``h_n : !A -> N`` when
  the call returns ``n``.

:func:`decompose` reads the components straight off the view function and
:func:`assemble` is its direct inverse.  :func:`recompose` builds the same
strategy from the components using only composition and structural maps,
so comparing the two routes checks the model against the reading.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .arena import Arena, arena_of_map, arena_of_type, flat_type
from .strategy import (
    DEFAULT_BUDGET, ShapeError, Strategy, bottom, classify, compose, compose1,
    der, dumps, is_strict_semantic, is_valid, mediate, point, proj, weaken,
)
from .syntax import NAT, Iota, Nat, Type, uncurry_type


class DecompositionError(ValueError):
    """The view function does not have the shape of a decomposable strategy."""


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Const:
    x: int


@dataclass(frozen=True, eq=True)
class Total:
    i: int                      # 1-based index of the head argument
    args: tuple                 # g_j : !A -> B_ij
    branches: Mapping[int, Strategy] = field(default_factory=dict)  # absent = bottom

    def __hash__(self):
        return hash((self.i, self.args, frozenset(self.branches.items())))


Decomposition = Bot | Const | Total


def _shape(ftype: Type):
    args, base = uncurry_type(ftype)
    return tuple(args), base


def _anc(key: Sequence[int], start: int) -> list[bool]:
    """Positions of a flat key hereditarily justified by position ``start``."""
    n = len(key) // 2
    out = [False] * n
    for t in range(n):
        j = key[2 * t + 1]
        out[t] = t == start or (j >= 0 and out[j])
    return out


def decompose(f: Strategy) -> Decomposition:
    """Read the decomposition of ``f`` off its view function."""
    args, base = _shape(f.ftype)
    k, w = len(args), f.window
    ar = f.arena
    vf = f.viewfn
    r0 = vf.get((0, -1))
    if r0 is None:
        if vf:
            raise DecompositionError("entries without a response to the initial question")
        return Bot()
    m0, _ = r0
    p0 = ar.path[m0]
    if p0 == ():
        if len(vf) != 1:
            raise DecompositionError("a constant strategy has a single entry")
        return Const(ar.value[m0])
    if len(p0) != 1 or not ar.is_question(m0):
        raise DecompositionError(f"unexpected first move {ar.address(m0)}")
    i = p0[0]
    hargs, _ = _shape(args[i - 1])
    g_vfs = [dict() for _ in hargs]
    g_ars = [arena_of_map(args, b, w) for b in hargs]
    h_vfs: dict[int, dict] = {}
    for key, resp in vf.items():
        if key == (0, -1):
            continue
        if len(key) < 6 or key[2] != m0:
            raise DecompositionError("view does not continue the head call")
        x = key[4]
        full = key + resp
        if not ar.is_question(x):
            n = ar.value[x]
            new = [0, -1]
            for t in range(6, len(full), 2):
                new += [full[t], _shift_ptr(full[t + 1], 2)]
            h_vfs.setdefault(n, {})[tuple(new[:-2])] = (new[-2], new[-1])
        else:
            j = ar.path[x][1]
            G = g_ars[j - 1]
            anc = _anc(full, 2)
            new = [0, -1]
            for t in range(6, len(full), 2):
                pos = t // 2
                mv, ptr = full[t], full[t + 1]
                p, v = ar.path[mv], ar.value[mv]
                if anc[pos]:
                    rest = p[2:]
                    q = () if not rest else (k + rest[0],) + rest[1:]
                else:
                    q = p
                new += [G.node(q, v), 0 if ptr in (0, 2) else _shift_ptr(ptr, 2)]
            g_vfs[j - 1][tuple(new[:-2])] = (new[-2], new[-1])
    g = tuple(Strategy(args, b, w, g_vfs[j]) for j, b in enumerate(hargs))
    h = {n: Strategy(args, base, w, h_vfs[n]) for n in sorted(h_vfs)}
    return Total(i, g, h)


def _shift_ptr(ptr: int, d: int) -> int:
    if ptr == 0:
        return 0
    if ptr <= d:
        raise DecompositionError("pointer into the hidden head call")
    return ptr - d


def assemble(d: Decomposition, ftype: Type, window: int) -> Strategy:
    """Direct inverse of :func:`decompose`."""
    args, base = _shape(ftype)
    k = len(args)
    ar = arena_of_type(ftype, window)
    if isinstance(d, Bot):
        return bottom(args, base, window)
    if isinstance(d, Const):
        return point(d.x, window, args) if isinstance(base, Nat) else _bad_const()
    i = d.i
    if not 1 <= i <= k:
        raise ShapeError(f"head {i} out of range 1..{k}")
    hargs, hbase = _shape(args[i - 1])
    if len(d.args) != len(hargs):
        raise ShapeError(f"head {i} takes {len(hargs)} arguments, got {len(d.args)}")
    hq = ar.by_path[(i,)]
    vf = {(0, -1): (hq, 0)}
    for j, g in enumerate(d.args, 1):
        G = arena_of_map(args, hargs[j - 1], window)
        if g.window != window or g.ftype != G.type:
            raise ShapeError(f"argument {j} has type {g.ftype}, expected {G.type}")
        prefix = [0, -1, hq, 0, ar.by_path[(i, j)], 1]
        for key, resp in g.viewfn.items():
            full = key + resp
            new = list(prefix)
            for t in range(2, len(full), 2):
                mv, ptr = full[t], full[t + 1]
                p, v = G.path[mv], G.value[mv]
                cod_side = not p or p[0] > k
                q = ((i, j) if not p else (i, j, p[0] - k) + p[1:]) if cod_side else p
                if ptr == 0:
                    ptr = 2 if cod_side else 0
                else:
                    ptr += 2
                new += [ar.node(q, v), ptr]
            vf[tuple(new[:-2])] = (new[-2], new[-1])
    for n, h in d.branches.items():
        if h.window != window or h.ftype != ftype:
            raise ShapeError(f"branch {n} has type {h.ftype}, expected {ftype}")
        if not ar.answers[hq] or not 0 <= n < window:
            raise ShapeError(f"no answer {n} to the head call")
        prefix = [0, -1, hq, 0, ar.answers[hq][n], 1]
        for key, resp in h.viewfn.items():
            full = key + resp
            new = list(prefix)
            for t in range(2, len(full), 2):
                ptr = full[t + 1]
                new += [full[t], 0 if ptr == 0 else ptr + 2]
            vf[tuple(new[:-2])] = (new[-2], new[-1])
    return Strategy(args, base, window, vf)


def _bad_const():
    raise ShapeError("a constant needs a nat result")


def head_strategy(ftype: Type, i: int, g: Sequence[Strategy], window: int,
                  budget: int = DEFAULT_BUDGET) -> Strategy:
    """``<pi_i, g_1, ..., g_q>^dagger ; Ap`` : call argument ``i`` on the ``g_j``."""
    args, _ = _shape(ftype)
    hargs, hbase = _shape(args[i - 1])
    ev = proj((args[i - 1],), 0, window).with_dom((args[i - 1],) + hargs)
    ev = Strategy(ev.dom, ev.cod, window, ev.viewfn)  # drop the projection tag
    return compose([proj(args, i - 1, window)] + list(g), ev, dom=args, budget=budget)


def recompose(d: Decomposition, ftype: Type, window: int,
              budget: int = DEFAULT_BUDGET) -> Strategy:
    """Build ``Com_i<g><h>`` (or bottom / a constant) from structural maps."""
    args, base = _shape(ftype)
    if isinstance(d, Bot):
        return bottom(args, base, window)
    if isinstance(d, Const):
        if not isinstance(base, Nat):
            _bad_const()
        return weaken(point(d.x, window), args)
    if not 1 <= d.i <= len(args):
        raise ShapeError(f"head {d.i} out of range")
    head = head_strategy(ftype, d.i, d.args, window, budget)
    if isinstance(base, Iota):
        if d.branches:
            raise ShapeError("no branches at a pure type")
        return head
    fam = {n: h.as_point() for n, h in d.branches.items()}
    med = mediate(fam, ftype, window).with_dom((NAT,) + args)
    projs = [proj(args, j, window) for j in range(len(args))]
    return compose([head] + projs, med, dom=args, budget=budget)


# ---------------------------------------------------------------------------
# Axiom suites

@dataclass
class CheckReport:
    axiom: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seed: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, what: str, *witnesses: Strategy) -> None:
        self.failures.append({"what": what, "witnesses": [dumps(s) for s in witnesses]})


@dataclass
class Bounds:
    window: int = 3
    norm: int = 6
    types: tuple = ()


def default_types():
    from .syntax import parse_type
    return tuple(parse_type(s) for s in
                 ("nat -> nat", "(nat -> nat) -> nat", "nat -> nat -> nat"))


def _rand_point_family(rng, ftype, window, norm, p=0.5):
    fam = {}
    for n in range(window):
        if rng.random() < p:
            fam[n] = _rand(rng, ftype, window, max(1, norm // 2))
    return fam


def _rand(rng, ftype, window, norm, **kw):
    from .generators import random_strategy
    return random_strategy(rng, ftype, window, norm, **kw)


def check_axiom(which: str, cases: int = 200, seed: int = 0,
                bounds: Bounds | None = None) -> CheckReport:
    """Run the instance suite for axiom ``which`` (``"A1"`` .. ``"A5"``)."""
    bounds = bounds or Bounds()
    if not bounds.types:
        bounds = Bounds(bounds.window, bounds.norm, default_types())
    rng = random.Random(f"{which}:{seed}")
    rep = CheckReport(which, 0, [], seed)
    suite = {"A1": _a1, "A2": _a2, "A3": _a3, "A4": _a4, "A5": _a5}.get(which.upper())
    if suite is None:
        raise ValueError(f"unknown axiom {which!r}")
    for n in range(cases):
        t = bounds.types[n % len(bounds.types)]
        suite(rng, t, bounds, rep, n)
        rep.cases += 1
    return rep


def _a1(rng, t, b, rep, n):
    """Discreteness of N: every map into N is bottom, constant, or strict-total."""
    f = _rand(rng, t, b.window, b.norm)
    args, _ = _shape(t)
    c = classify(f)
    is_bot = f.is_bottom()
    r = f.first_response()
    is_const = r is not None and f.arena.path[r[0]] == ()
    if is_const and f != weaken(point(f.arena.value[r[0]], b.window), args):
        is_const = False
    is_total = c.total
    if is_bot + is_const + is_total != 1:
        rep.fail("trichotomy", f)
    if c.strict != is_strict_semantic(f):
        rep.fail("strictness disagrees with composition against bottom", f)


def _embed(g: Strategy, dom: tuple, i: int) -> Strategy:
    """Transport ``g : !A_i -> N`` along the i-th projection, by relabelling."""
    A = arena_of_map(dom, g.cod, g.window)
    src = g.arena
    k = len(dom)
    table = []
    for m in range(src.size):
        p = src.path[m]
        if not p:
            q = p
        elif p[0] == 1:
            q = (i + 1,) + p[1:]
        else:
            q = (p[0] - 1 + k,) + p[1:]
        table.append(A.node(q, src.value[m]))
    vf = {tuple(table[x] if s % 2 == 0 else x for s, x in enumerate(key)): (table[r], j)
          for key, (r, j) in g.viewfn.items()}
    return Strategy(dom, g.cod, g.window, vf)


def _a2(rng, t, b, rep, n):
    """Total maps out of a product that use one component factor through it."""
    args, base = _shape(t)
    k = len(args)
    i = rng.randrange(k)
    gi = _rand(rng, flat_type((args[i],), base), b.window, b.norm, root="total")
    f = _embed(gi, args, i)
    hits = []
    for j in range(k):
        if j == i:
            via = compose([proj(args, j, b.window)], gi, dom=args)
            if via == f:
                hits.append(j)
        elif _uses_only(f, j):
            hits.append(j)
    if hits != [i]:
        rep.fail(f"factors through {hits}, expected [{i}]", f)
    d = decompose(f)
    if not isinstance(d, Total) or d.i != i + 1:
        rep.fail("decomposition head differs from the factoring projection", f)


def _uses_only(f: Strategy, j: int) -> bool:
    ar = f.arena
    for key, (r, _) in f.viewfn.items():
        for m in list(key[0::2]) + [r]:
            p = ar.path[m]
            if p and p[0] <= len(f.dom) and p[0] != j + 1:
                return False
    return True


_A3_TYPES = None


def _a3(rng, t, b, rep, n):
    """Comonad laws for promotion and dereliction, through the thread kernel."""
    from .syntax import parse_type
    global _A3_TYPES
    if _A3_TYPES is None:
        _A3_TYPES = (NAT, parse_type("nat -> nat"))
    A, B, C, D = (rng.choice(_A3_TYPES) for _ in range(4))
    w, nb = b.window, b.norm
    f = _rand(rng, flat_type((A,), B), w, nb, dom_len=1)
    g = _rand(rng, flat_type((B,), C), w, nb, dom_len=1)
    h = _rand(rng, flat_type((C,), D), w, nb, dom_len=1)
    if compose1(f, der(B, w)) != f:
        rep.fail("f^dagger ; der != f", f)
    if compose1(der(A, w), f) != f:
        rep.fail("der^dagger ; f != f", f)
    lhs = compose1(compose1(f, g), h)
    rhs = compose1(f, compose1(g, h))
    if lhs != rhs:
        rep.fail("(f^dagger ; g)^dagger ; h != f^dagger ; (g^dagger ; h)", f, g, h)
    for s in (lhs,):
        if not is_valid(s):
            rep.fail("composite is not a well-formed strategy", s)


def split_head(f: Strategy) -> Strategy:
    """The corestriction: move the head occurrence to a new linear component.

    For strict ``f : !A -> N`` calling ``A_i`` first, the result is a map out of
    ``A_i x A`` whose first component is used exactly once, as the head call.
    """
    args, base = _shape(f.ftype)
    ar = f.arena
    r0 = f.first_response()
    if r0 is None or not ar.path[r0[0]] or ar.path[r0[0]][0] > len(args):
        raise ShapeError("split_head needs a strict, total strategy")
    i = ar.path[r0[0]][0]
    dom = (args[i - 1],) + args
    dst = arena_of_map(dom, base, f.window)
    vf = {}
    for key, resp in f.viewfn.items():
        full = key + resp
        anc = _anc(full, 1)
        new = []
        for t in range(0, len(full), 2):
            p, v = ar.path[full[t]], ar.value[full[t]]
            if t // 2 >= 1 and anc[t // 2]:
                q = (1,) + p[1:]
            else:
                q = p if not p else (p[0] + 1,) + p[1:]
            new += [dst.node(q, v), full[t + 1]]
        vf[tuple(new[:-2])] = (new[-2], new[-1])
    return Strategy(dom, base, f.window, vf)


def join_head(fp: Strategy, i: int) -> Strategy:
    """Precompose with contraction and projection ``i`` (inverse of split_head)."""
    args = fp.dom[1:]
    w = fp.window
    return compose([proj(args, i, w)] + [proj(args, j, w) for j in range(len(args))],
                   fp, dom=args)


def _a4(rng, t, b, rep, n):
    """Corestriction is a bijection: both round trips."""
    args, base = _shape(t)
    w = b.window
    f = _rand(rng, t, w, b.norm, root="total")
    fp = split_head(f)
    i = f.arena.path[f.first_response()[0]][0]
    if join_head(fp, i - 1) != f:
        rep.fail("contraction after split_head is not the identity", f)
    # the other direction: a map linear in a fresh head component
    i = rng.randrange(len(args))
    dom = (args[i],) + args

    def linear(ar, key, r):
        # the head component is opened by the first move and never again
        return (ar.path[r[0]] == (1,)) == (key == (0, -1))

    fp2 = _rand(rng, flat_type(dom, base), w, b.norm, root="total", allow=linear)
    if split_head(join_head(fp2, i)) != fp2:
        rep.fail("split_head after contraction is not the identity", fp2)


def random_decomposition(rng, ftype: Type, window: int, norm: int) -> Total:
    args, base = _shape(ftype)
    i = rng.randrange(len(args)) + 1
    hargs, _ = _shape(args[i - 1])
    g = tuple(_rand(rng, flat_type(args, bj), window, max(1, norm // 2), dom_len=len(args))
              for bj in hargs)
    h = {}
    if isinstance(base, Nat):
        for x in range(window):
            if rng.random() < 0.5:
                hx = _rand(rng, ftype, window, max(1, norm // 2))
                if not hx.is_bottom():
                    h[x] = hx
    return Total(i, g, h)


def _a5(rng, t, b, rep, n):
    """(g, h) -> Com<g><h> is a bijection onto total strategies: both round trips."""
    w = b.window
    d = random_decomposition(rng, t, w, b.norm)
    f = recompose(d, t, w)
    if decompose(f) != d:
        rep.fail("decompose(recompose(g, h)) != (g, h)", f, *d.args, *d.branches.values())
    if f != assemble(d, t, w):
        rep.fail("recompose and assemble disagree", f)
    f2 = _rand(rng, t, w, b.norm, root="total")
    if recompose(decompose(f2), t, w) != f2:
        rep.fail("recompose(decompose(f)) != f", f2)
