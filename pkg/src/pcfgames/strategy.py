"""Compact innocent strategies and the structure of the co-Kleisli category.

A :class:`Strategy` for a map ``!(A1 x ... x Ak) -> B`` lives on the arena
of ``A1 -> ... -> Ak -> B``.  Its view function sends P-views (odd-length
sequences ending with an Opponent move) to the Player's response.  A view is
stored as a flat tuple ``(m0, j0, m1, j1, ...)`` of arena move ids and
justifier positions (``-1`` for the initial move); a response is a pair
``(move, justifier position)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from . import kernel
from .arena import Arena, arena_of_map, arena_of_type, flat_type
from .syntax import NAT, Arrow, Nat, Type, parse_type, uncurry_type

DEFAULT_BUDGET = 2_000_000

View = tuple
Response = tuple


class ShapeError(ValueError):
    """A morphism was requested at objects of the wrong shape."""


class Strategy:
    """A compact innocent strategy for a map ``!dom -> cod``.

    Equality and hashing look only at the arena and the view function, so
    currying (moving components between ``dom`` and ``cod``) does not change
    identity.
    """

    __slots__ = ("dom", "cod", "window", "_vf", "_hash", "proj")

    def __init__(self, dom: Sequence[Type], cod: Type, window: int,
                 viewfn: Mapping[View, Response], proj: int | None = None):
        self.dom = tuple(dom)
        self.cod = cod
        self.window = window
        self._vf = dict(viewfn)
        self._hash = None
        # index of the context component when this is a projection copycat
        self.proj = proj

    @property
    def ftype(self) -> Type:
        return flat_type(self.dom, self.cod)

    @property
    def arena(self) -> Arena:
        return arena_of_map(self.dom, self.cod, self.window)

    @property
    def viewfn(self) -> Mapping[View, Response]:
        return MappingProxyType(self._vf)

    def __len__(self) -> int:
        return len(self._vf)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Strategy):
            return NotImplemented
        return (self.window == other.window and self.ftype == other.ftype
                and self._vf == other._vf)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ftype, self.window, frozenset(self._vf.items())))
        return self._hash

    def __repr__(self) -> str:
        dom = ", ".join(map(str, self.dom))
        return f"<Strategy !({dom}) -> {self.cod} window={self.window} norm={len(self._vf)}>"

    # -- re-splitting ---------------------------------------------------
    def with_dom(self, dom: Sequence[Type]) -> "Strategy":
        """The same view function read as a map out of ``dom`` (curry/uncurry)."""
        dom = tuple(dom)
        args, base = uncurry_type(self.ftype)
        if tuple(args[:len(dom)]) != dom:
            raise ShapeError(f"{self.ftype} does not start with {dom}")
        cod = flat_type(tuple(args[len(dom):]), base)
        return Strategy(dom, cod, self.window, self._vf)

    def as_point(self) -> "Strategy":
        return self.with_dom(())

    def uncurried(self) -> "Strategy":
        """Read as a map out of every argument of the flattened type."""
        return self.with_dom(uncurry_type(self.ftype)[0])

    # -- inspection -------------------------------------------------------
    def first_response(self) -> Response | None:
        return self._vf.get((0, -1))

    def is_bottom(self) -> bool:
        return not self._vf

    def describe(self) -> list[str]:
        """Human-readable lines ``view => response`` using move addresses."""
        ar = self.arena
        lines = []
        for key in sorted(self._vf):
            m, j = self._vf[key]
            lines.append(f"{show_view(ar, key)} => {ar.address(m)}@{j}")
        return lines


def show_view(ar: Arena, key: View) -> str:
    parts = []
    for t in range(0, len(key), 2):
        j = key[t + 1]
        parts.append(ar.address(key[t]) + ("" if j < 0 else f"@{j}"))
    return " ".join(parts)


def norm(f: Strategy) -> int:
    """Cardinality of the view function."""
    return len(f)


def strategy_eq(f: Strategy, g: Strategy) -> bool:
    if f.window != g.window or f.ftype != g.ftype:
        raise ShapeError(f"cannot compare strategies on {f.ftype} and {g.ftype}")
    return f._vf == g._vf


def leq(f: Strategy, g: Strategy) -> bool:
    """View-function inclusion (the order in which bottom is least)."""
    return all(g._vf.get(k) == r for k, r in f._vf.items())


# ---------------------------------------------------------------------------
# Canonical strategies

def bottom(dom: Sequence[Type], cod: Type, window: int) -> Strategy:
    return Strategy(dom, cod, window, {})


def point(x: int, window: int, dom: Sequence[Type] = ()) -> Strategy:
    """``x`` as a map into the flat arena (constant, after weakening)."""
    if not 0 <= x < window:
        raise ShapeError(f"value {x} is outside the window 0..{window - 1}")
    ar = arena_of_map(tuple(dom), NAT, window)
    return Strategy(dom, NAT, window, {(0, -1): (ar.answer(0, x), 0)})


def _copycat_views(ar: Arena, mirror, first: int) -> dict:
    """View function of a copycat that opens with ``first`` (justified by the root)."""
    vf = {(0, -1): (first, 0)}
    stack = [((0, -1), first, 0)]
    while stack:
        key, r, rj = stack.pop()
        pkey = key + (r, rj)
        L = len(pkey) // 2
        for m in ar.o_moves[r]:
            okey = pkey + (m, L - 1)
            resp = mirror[m]
            # the copy is justified by the partner of m's justifier
            vf[okey] = (resp, L - 2)
            stack.append((okey, resp, L - 2))
    return vf


def _mirror_table(ar: Arena, k: int, i: int) -> list[int]:
    """Involution swapping argument ``i+1`` of the root with the codomain part."""
    out = [-1] * ar.size
    for m in range(ar.size):
        p, v = ar.path[m], ar.value[m]
        if p == ():
            q = (i + 1,)
        elif p[0] == i + 1:
            rest = p[1:]
            q = () if not rest else (k + rest[0],) + rest[1:]
        elif p[0] > k:
            q = (i + 1, p[0] - k) + p[1:]
        else:
            continue
        out[m] = ar.node(q, v)
    return out


@lru_cache(maxsize=None)
def _proj_views(dom: tuple, i: int, window: int):
    ar = arena_of_map(dom, dom[i], window)
    mirror = _mirror_table(ar, len(dom), i)
    return MappingProxyType(_copycat_views(ar, mirror, ar.by_path[(i + 1,)]))


def proj(dom: Sequence[Type], i: int, window: int) -> Strategy:
    """Projection ``pi_i ; der`` from ``!(dom)`` onto component ``i`` (0-based)."""
    dom = tuple(dom)
    if not 0 <= i < len(dom):
        raise ShapeError(f"no component {i} in a product of {len(dom)}")
    return Strategy(dom, dom[i], window, _proj_views(dom, i, window), proj=i)


def der(a: Type, window: int) -> Strategy:
    """Dereliction ``!A -> A``: the copycat, composed as a genuine thread."""
    return Strategy((a,), a, window, _proj_views((a,), 0, window))


def identity(a: Type, window: int) -> Strategy:
    """Identity on ``A``; same view function as dereliction."""
    return der(a, window)


def ap(a: Type, b: Type, window: int) -> Strategy:
    """Evaluation ``(A => B) x A -> B``, the uncurried identity on ``A => B``."""
    ab = Arrow(a, b)
    return Strategy((ab, a), b, window, _proj_views((ab,), 0, window))


def weaken(f: Strategy, ctx: Sequence[Type]) -> Strategy:
    """Precompose with the projection that forgets a new leading context ``ctx``."""
    ctx = tuple(ctx)
    if not ctx:
        return f
    src = f.arena
    dst = arena_of_map(ctx + f.dom, f.cod, f.window)
    shift = len(ctx)
    table = [dst.node(_shift_path(src.path[m], shift), src.value[m]) for m in range(src.size)]
    vf = {_relabel_key(k, table): (table[r[0]], r[1]) for k, r in f._vf.items()}
    return Strategy(ctx + f.dom, f.cod, f.window, vf)


def _shift_path(p, shift):
    return p if not p else (p[0] + shift,) + p[1:]


def _relabel_key(key, table):
    return tuple(table[x] if t % 2 == 0 else x for t, x in enumerate(key))


def mediate(family: Mapping[int, Strategy], cod: Type, window: int) -> Strategy:
    """The unique total map ``[f_x | x] : N -> A`` with ``x ; [f_x] = f_x``.

    ``family`` maps window values to points of ``A``; absent values mean
    bottom.
    """
    dst = arena_of_map((NAT,), cod, window)
    vf = {(0, -1): (dst.by_path[(1,)], 0)}
    for x, fx in family.items():
        if not 0 <= x < window:
            raise ShapeError(f"branch {x} is outside the window")
        if fx.window != window or fx.ftype != cod:
            raise ShapeError(f"branch {x} has type {fx.ftype}, expected {cod}")
        src = fx.arena
        table = [dst.node(_shift_path(src.path[m], 1), src.value[m]) for m in range(src.size)]
        ans = dst.answer(dst.by_path[(1,)], x)
        for key, (r, rj) in fx._vf.items():
            new = [0, -1, dst.by_path[(1,)], 0, ans, 1]
            for t in range(2, len(key), 2):
                j = key[t + 1]
                new.append(table[key[t]])
                new.append(j if j == 0 else j + 2)
            vf[tuple(new)] = (table[r], rj if rj == 0 else rj + 2)
    return Strategy((NAT,), cod, window, vf)


def case_strategy(k: int, window: int) -> Strategy:
    """``case_k`` as ``der_N ; [f_i | i]`` with ``f_i`` the i-th projection of ``N^k``."""
    nats = (NAT,) * k
    family = {i: proj(nats, i, window).as_point() for i in range(min(k, window))}
    med = mediate(family, flat_type(nats, NAT), window)
    return compose([der(NAT, window)], med, dom=(NAT,)).as_point()


# ---------------------------------------------------------------------------
# Composition

@dataclass
class _Plan:
    g_vf: dict
    f_vfs: list
    g_route: list
    f_route: list
    comp_to_g: list
    gamma_to_f: list
    direct_inv: list
    g_is_o: list
    f_is_o: list
    comp_o_moves: list


@lru_cache(maxsize=4096)
def _tables(gamma: tuple, delta: tuple, cod: Type, projs: tuple, window: int):
    k, m = len(gamma), len(delta)
    C = arena_of_map(gamma, cod, window)
    G = arena_of_map(delta, cod, window)
    Fs = [arena_of_map(gamma, d, window) for d in delta]

    g_route = []
    for n in range(G.size):
        p, v = G.path[n], G.value[n]
        if not p or p[0] > m:
            q = p if not p else (p[0] - m + k,) + p[1:]
            g_route.append((0, C.node(q, v), 0))
            continue
        i, rest = p[0] - 1, p[1:]
        j = projs[i]
        if j is not None:
            g_route.append((2, i, C.node((j + 1,) + rest, v)))
        else:
            q = () if not rest else (k + rest[0],) + rest[1:]
            g_route.append((1, i, Fs[i].node(q, v)))

    comp_to_g = []
    for n in range(C.size):
        p, v = C.path[n], C.value[n]
        if not p or p[0] > k:
            q = p if not p else (p[0] - k + m,) + p[1:]
            comp_to_g.append(G.node(q, v))
        else:
            comp_to_g.append(-1)

    f_route, gamma_to_f, direct_inv = [], [], []
    for i, F in enumerate(Fs):
        j = projs[i]
        if j is not None:
            f_route.append(None)
            gamma_to_f.append(None)
            inv = [-1] * C.size
            for n in range(C.size):
                p, v = C.path[n], C.value[n]
                if p and p[0] == j + 1:
                    inv[n] = G.node((i + 1,) + p[1:], v)
            direct_inv.append(inv)
            continue
        direct_inv.append(None)
        route = []
        for n in range(F.size):
            p, v = F.path[n], F.value[n]
            if not p:
                route.append((1, G.node((i + 1,), v)))
            elif p[0] <= k:
                route.append((0, C.node(p, v)))
            else:
                route.append((1, G.node((i + 1, p[0] - k) + p[1:], v)))
        f_route.append(route)
        g2f = [-1] * C.size
        for n in range(C.size):
            p, v = C.path[n], C.value[n]
            if p and p[0] <= k:
                g2f[n] = F.node(p, v)
        gamma_to_f.append(g2f)

    return (g_route, f_route, comp_to_g, gamma_to_f, direct_inv,
            G.is_opponent, [F.is_opponent for F in Fs], C.o_moves)


def _plan(fs: Sequence[Strategy], g: Strategy, dom: tuple) -> _Plan:
    if len(fs) != len(g.dom):
        raise ShapeError(f"composition needs {len(g.dom)} components, got {len(fs)}")
    for i, (f, d) in enumerate(zip(fs, g.dom)):
        if f.dom != dom:
            raise ShapeError(f"component {i} is a map out of {f.dom}, expected {dom}")
        if f.cod != d:
            raise ShapeError(f"component {i} lands in {f.cod}, g expects {d}")
        if f.window != g.window:
            raise ShapeError("window mismatch")
    projs = tuple(f.proj for f in fs)
    (g_route, f_route, comp_to_g, gamma_to_f, direct_inv,
     g_is_o, f_is_o, o_moves) = _tables(dom, g.dom, g.cod, projs, g.window)
    f_vfs = [None if f.proj is not None else f._vf for f in fs]
    return _Plan(g._vf, f_vfs, g_route, f_route, comp_to_g, gamma_to_f,
                 direct_inv, g_is_o, f_is_o, o_moves)


def compose(fs: Sequence[Strategy], g: Strategy, dom: Sequence[Type] | None = None,
            budget: int = DEFAULT_BUDGET) -> Strategy:
    """``<f_1, ..., f_m>^dagger ; g`` in the co-Kleisli category.

    Each ``f_i : !dom -> g.dom[i]``; the result is a map ``!dom -> g.cod``.
    ``dom`` must be given when ``fs`` is empty.
    """
    if dom is None:
        if not fs:
            raise ShapeError("dom is required when composing with an empty tuple")
        dom = fs[0].dom
    dom = tuple(dom)
    if g.is_bottom():
        return Strategy(dom, g.cod, g.window, {})
    plan = _plan(fs, g, dom)
    vf = kernel.compose_views(plan, budget)
    return Strategy(dom, g.cod, g.window, vf)


def compose1(f: Strategy, g: Strategy, budget: int = DEFAULT_BUDGET) -> Strategy:
    """``f^dagger ; g`` for a single ``f``."""
    return compose([f], g, dom=f.dom, budget=budget)


def apply_value(fs: Sequence[Strategy], g: Strategy, dom: Sequence[Type] = (),
                budget: int = DEFAULT_BUDGET) -> int | None:
    """Answer of ``<fs>^dagger ; g`` to its initial question, for ``g`` into N.

    Returns the value, or None when the composite is bottom.  Raises if the
    composite's first move is a question.
    """
    dom = tuple(dom)
    if g.is_bottom():
        return None
    plan = _plan(fs, g, dom)
    r = kernel.first_response(plan, budget)
    if r is None:
        return None
    ar = arena_of_map(dom, g.cod, g.window)
    if ar.path[r[0]] != ():
        raise ShapeError("composite asks a question; it is not a point of N")
    return ar.value[r[0]]


def pair(*fs: Strategy) -> tuple[Strategy, ...]:
    """``<f_1, ..., f_m>``; maps into products are tuples of components."""
    return tuple(fs)


def con(a: Type, window: int) -> tuple[Strategy, Strategy]:
    """Contraction ``!A -> !A (x) !A``."""
    d = der(a, window)
    return (d, d)


def weak(a: Type, window: int) -> tuple:
    """Weakening ``!A -> 1``: the empty tuple of components."""
    return ()


def exp_iso(a: Type, b: Type, window: int) -> tuple[Strategy, Strategy]:
    """``!(A x B) -> !A (x) !B``; the identity relabelling under our addressing."""
    return (proj((a, b), 0, window), proj((a, b), 1, window))


def exp_iso_unit() -> tuple:
    """``!1 -> 1``."""
    return ()


@dataclass(frozen=True)
class Promoted:
    """``f^dagger : !A -> !B`` for ``f : !A -> B``."""
    of: Strategy

    def then(self, other: "Promoted | Strategy") -> "Promoted | Strategy":
        """Composition in the linear category, ``self ; other``."""
        if isinstance(other, Promoted):
            return Promoted(compose1(self.of, other.of))
        return compose1(self.of, other)


def promote(f: Strategy) -> Promoted:
    return Promoted(f)


class StructuralKind(enum.Enum):
    IDENTITY = "identity"
    DER = "der"
    CON = "con"
    WEAK = "weak"
    PROMOTE = "promote"
    PAIR = "pair"
    PROJ = "proj"
    CURRY = "curry"
    UNCURRY = "uncurry"
    AP = "ap"
    BOT = "bot"
    POINT = "point"
    MEDIATE = "mediate"
    EXP_ISO = "exp_iso"
    EXP_ISO_UNIT = "exp_iso_unit"


def structural(kind: StructuralKind, **at):
    """Build a canonical morphism by kind.

    Keyword arguments name the objects: ``a``, ``b``, ``dom``, ``cod``,
    ``i``, ``x``, ``window``, ``of`` (a strategy), ``family`` or ``parts``.
    """
    w = at.get("window")
    k = StructuralKind(kind)
    if k is StructuralKind.IDENTITY:
        return identity(at["a"], w)
    if k is StructuralKind.DER:
        return der(at["a"], w)
    if k is StructuralKind.CON:
        return con(at["a"], w)
    if k is StructuralKind.WEAK:
        return weak(at["a"], w)
    if k is StructuralKind.PROMOTE:
        return promote(at["of"])
    if k is StructuralKind.PAIR:
        return pair(*at["parts"])
    if k is StructuralKind.PROJ:
        return proj(at["dom"], at["i"], w)
    if k is StructuralKind.CURRY:
        f = at["of"]
        n = at.get("n", len(f.dom) - 1)
        return f.with_dom(f.dom[:n])
    if k is StructuralKind.UNCURRY:
        f = at["of"]
        n = at.get("n", 1)
        args, _ = uncurry_type(f.cod)
        return f.with_dom(f.dom + args[:n])
    if k is StructuralKind.AP:
        return ap(at["a"], at["b"], w)
    if k is StructuralKind.BOT:
        return bottom(at.get("dom", ()), at["cod"], w)
    if k is StructuralKind.POINT:
        return point(at["x"], w, at.get("dom", ()))
    if k is StructuralKind.MEDIATE:
        return mediate(at["family"], at["cod"], w)
    if k is StructuralKind.EXP_ISO:
        return exp_iso(at["a"], at["b"], w)
    if k is StructuralKind.EXP_ISO_UNIT:
        return exp_iso_unit()
    raise ShapeError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Strictness

@dataclass(frozen=True)
class Classification:
    strict: bool
    total: bool


def classify(f: Strategy) -> Classification:
    """Strict iff the first response, if any, is a move in the domain."""
    r = f.first_response()
    if r is None:
        return Classification(True, False)
    p = f.arena.path[r[0]]
    strict = bool(p) and p[0] <= len(f.dom)
    return Classification(strict, strict)


def is_strict_semantic(f: Strategy) -> bool:
    """``f o bottom = bottom``, decided by composing with bottom points."""
    bots = [bottom((), d, f.window) for d in f.dom]
    return compose(bots, f, dom=()).is_bottom()


# ---------------------------------------------------------------------------
# Well-formedness

def check_strategy(f: Strategy) -> list[str]:
    """Problems with ``f`` as an innocent, well-bracketed, reachable strategy."""
    ar = f.arena
    problems = []
    vf = f._vf
    for key, resp in vf.items():
        where = show_view(ar, key)
        err = _check_view(ar, key, resp)
        if err:
            problems.append(f"{where}: {err}")
            continue
        for t in range(2, len(key), 4):
            prefix = key[:t]
            if vf.get(prefix) != (key[t], key[t + 1]):
                problems.append(f"{where}: unreachable (prefix not played by the strategy)")
                break
    return problems


def _check_view(ar: Arena, key: View, resp: Response) -> str | None:
    if len(key) % 4 != 2:
        return "a view must have odd length"
    moves = [key[t] for t in range(0, len(key), 2)] + [resp[0]]
    ptrs = [key[t] for t in range(1, len(key), 2)] + [resp[1]]
    if moves[0] != 0 or ptrs[0] != -1:
        return "a view starts with the initial question"
    open_qs: list[int] = [0]
    answered = set()
    for pos in range(1, len(moves)):
        m, j = moves[pos], ptrs[pos]
        if not 0 <= m < ar.size:
            return f"unknown move {m}"
        opponent = pos % 2 == 0
        if ar.is_opponent[m] != opponent:
            return f"move {ar.address(m)} at position {pos} has the wrong polarity"
        if opponent and j != pos - 1:
            return "an Opponent move in a P-view is justified by its predecessor"
        if not 0 <= j < pos:
            return f"bad justifier {j} at position {pos}"
        if ar.parent[m] != moves[j]:
            return f"{ar.address(moves[j])} does not enable {ar.address(m)}"
        if ar.is_question(m):
            open_qs.append(pos)
        else:
            pending = [q for q in open_qs if q not in answered]
            if not pending or pending[-1] != j:
                return f"answer {ar.address(m)} does not answer the pending question"
            answered.add(j)
    return None


def is_valid(f: Strategy) -> bool:
    return not check_strategy(f)


# ---------------------------------------------------------------------------
# Serialization

HEADER = "pcf-strategy 1"


def dumps(f: Strategy) -> str:
    """Text form: header (type, split, window, norm) then one line per entry."""
    ar = f.arena
    lines = [HEADER, f"type {f.ftype}", f"split {len(f.dom)}",
             f"window {f.window}", f"norm {len(f)}"]
    for key in sorted(f._vf):
        m, j = f._vf[key]
        pairs = []
        for t in range(0, len(key), 2):
            pj = key[t + 1]
            pairs.append(f"{ar.address(key[t])},{'-' if pj < 0 else pj}")
        lines.append("view " + " ".join(pairs) + f" -> {ar.address(m)},{j}")
    return "\n".join(lines) + "\n"


class StrategyFormatError(ValueError):
    pass


def loads(text: str) -> Strategy:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] != HEADER:
        raise StrategyFormatError(f"missing header {HEADER!r}")
    meta = {}
    entries = []
    for ln in lines[1:]:
        word, _, rest = ln.partition(" ")
        if word == "view":
            entries.append(rest)
        elif word in ("type", "split", "window", "norm"):
            meta[word] = rest
        else:
            raise StrategyFormatError(f"unexpected line {ln!r}")
    try:
        t = parse_type(meta["type"])
        window = int(meta["window"])
        split = int(meta.get("split", 0))
    except KeyError as e:
        raise StrategyFormatError(f"missing field {e}") from None
    args, base = uncurry_type(t)
    dom, cod = args[:split], flat_type(args[split:], base)
    ar = arena_of_type(t, window)
    vf = {}
    for rest in entries:
        lhs, _, rhs = rest.partition("->")
        key = []
        for tok in lhs.split():
            a, _, j = tok.rpartition(",")
            key += [ar.move_of_address(a), -1 if j == "-" else int(j)]
        a, _, j = rhs.strip().rpartition(",")
        vf[tuple(key)] = (ar.move_of_address(a), int(j))
    f = Strategy(dom, cod, window, vf)
    if "norm" in meta and int(meta["norm"]) != len(f):
        raise StrategyFormatError(f"norm {meta['norm']} does not match {len(f)} entries")
    return f


def from_addresses(dom: Sequence[Type], cod: Type, window: int,
                   entries: Iterable[tuple[Sequence[tuple[str, int]], tuple[str, int]]]) -> Strategy:
    """Build a strategy from ``[((addr, ptr), ...), (addr, ptr)]`` entries."""
    ar = arena_of_map(tuple(dom), cod, window)
    vf = {}
    for view, (ra, rj) in entries:
        key = []
        for a, j in view:
            key += [ar.move_of_address(a), j]
        vf[tuple(key)] = (ar.move_of_address(ra), rj)
    return Strategy(dom, cod, window, vf)


def is_nat(t: Type) -> bool:
    return isinstance(t, Nat)
