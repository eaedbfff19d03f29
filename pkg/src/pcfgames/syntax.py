"""PCF abstract syntax: types, terms, parsing, printing, typing and congruence.

Concrete grammar::

    type ::= base | base -> type | (type) -> type
    base ::= nat | iota | i
    term ::= \\x:type. term | app
    app  ::= atom atom*
    atom ::= x | n | omega | Y[type] | case[k] | (term)

``--`` starts a line comment.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union


# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True)
class Nat:
    def __str__(self) -> str:
        return "nat"


@dataclass(frozen=True)
class Iota:
    def __str__(self) -> str:
        return "iota"


@dataclass(frozen=True)
class Arrow:
    domain: "Type"
    codomain: "Type"

    def __str__(self) -> str:
        left = str(self.domain)
        if isinstance(self.domain, Arrow):
            left = f"({left})"
        return f"{left} -> {self.codomain}"


Type = Union[Nat, Iota, Arrow]
NAT = Nat()
IOTA = Iota()


def arrow(*types: Type) -> Type:
    """Right-associated arrow ``t1 -> t2 -> ... -> tn``."""
    result = types[-1]
    for t in reversed(types[:-1]):
        result = Arrow(t, result)
    return result


def uncurry_type(t: Type) -> tuple[tuple[Type, ...], Type]:
    """Split ``T1 -> ... -> Tk -> b`` into ``((T1, ..., Tk), b)``."""
    args = []
    while isinstance(t, Arrow):
        args.append(t.domain)
        t = t.codomain
    return tuple(args), t


def type_size(t: Type) -> int:
    if isinstance(t, Arrow):
        return 1 + type_size(t.domain) + type_size(t.codomain)
    return 1


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    name: str
    annotation: Type
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Num:
    n: int


@dataclass(frozen=True)
class Omega:
    pass


@dataclass(frozen=True)
class Y:
    at: Type


@dataclass(frozen=True)
class CaseK:
    k: int


Term = Union[Var, Lam, App, Num, Omega, Y, CaseK]
OMEGA = Omega()


def apply(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def lams(binders: Sequence[tuple[str, Type]], body: Term) -> Term:
    for name, ty in reversed(binders):
        body = Lam(name, ty, body)
    return body


def spine(m: Term) -> tuple[Term, list[Term]]:
    """Head and argument list of an application spine."""
    args = []
    while isinstance(m, App):
        args.append(m.arg)
        m = m.fn
    args.reverse()
    return m, args


def term_size(m: Term) -> int:
    """Number of AST nodes (type annotations not counted)."""
    if isinstance(m, Lam):
        return 1 + term_size(m.body)
    if isinstance(m, App):
        return 1 + term_size(m.fn) + term_size(m.arg)
    return 1


def free_vars(m: Term) -> frozenset[str]:
    if isinstance(m, Var):
        return frozenset([m.name])
    if isinstance(m, Lam):
        return free_vars(m.body) - {m.name}
    if isinstance(m, App):
        return free_vars(m.fn) | free_vars(m.arg)
    return frozenset()


def _all_names(m: Term) -> set[str]:
    if isinstance(m, Var):
        return {m.name}
    if isinstance(m, Lam):
        return {m.name} | _all_names(m.body)
    if isinstance(m, App):
        return _all_names(m.fn) | _all_names(m.arg)
    return set()


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    stem = base.rstrip("0123456789") or "x"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def subst(m: Term, x: str, n: Term) -> Term:
    """Capture-avoiding ``m[n/x]``."""
    fv_n = free_vars(n)

    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return n if t.name == x else t
        if isinstance(t, App):
            return App(go(t.fn), go(t.arg))
        if isinstance(t, Lam):
            if t.name == x:
                return t
            if x not in free_vars(t.body):
                return t
            if t.name in fv_n:
                new = fresh_name(t.name, fv_n | _all_names(t.body) | {x})
                body = subst(t.body, t.name, Var(new))
                return Lam(new, t.annotation, go(body))
            return Lam(t.name, t.annotation, go(t.body))
        return t

    return go(m)


def _debruijn(m: Term, env: tuple[str, ...]):
    if isinstance(m, Var):
        for i in range(len(env) - 1, -1, -1):
            if env[i] == m.name:
                return ("b", len(env) - 1 - i)
        return ("f", m.name)
    if isinstance(m, Lam):
        return ("lam", m.annotation, _debruijn(m.body, env + (m.name,)))
    if isinstance(m, App):
        return ("app", _debruijn(m.fn, env), _debruijn(m.arg, env))
    return m


def alpha_key(m: Term):
    """A hashable key identifying ``m`` up to alpha-equivalence."""
    return _debruijn(m, ())


def alpha_eq(m: Term, n: Term) -> bool:
    return alpha_key(m) == alpha_key(n)


# ---------------------------------------------------------------------------
# Printing

def show_type(t: Type) -> str:
    return str(t)


def show(m: Term) -> str:
    if isinstance(m, Lam):
        return f"\\{m.name}:{m.annotation}. {show(m.body)}"
    if isinstance(m, App):
        head, args = spine(m)
        parts = [_show_atom(head)] + [_show_atom(a) for a in args]
        return " ".join(parts)
    return _show_atom(m)


def _show_atom(m: Term) -> str:
    if isinstance(m, Var):
        return m.name
    if isinstance(m, Num):
        return str(m.n)
    if isinstance(m, Omega):
        return "omega"
    if isinstance(m, Y):
        return f"Y[{m.at}]"
    if isinstance(m, CaseK):
        return f"case[{m.k}]"
    return f"({show(m)})"


# ---------------------------------------------------------------------------
# Parsing

class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos
        self.line = line
        self.column = col


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<arrow>->|=>|⇒|→)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9']*|ι)
  | (?P<sym>[\\λ:.()\[\]])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = mo.lastgroup
        if kind != "ws":
            val = mo.group()
            if kind == "sym" and val == "λ":
                val = "\\"
            toks.append((kind, val, pos))
        pos = mo.end()
    toks.append(("eof", "", len(text)))
    return toks


_BASE_NAMES = {"nat": NAT, "iota": IOTA, "i": IOTA, "ι": IOTA}
_KEYWORDS = {"omega", "Y", "case"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val: str):
        tok = self.next()
        if tok[1] != val:
            raise ParseError(f"expected {val!r}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        return tok

    def error(self, msg: str):
        raise ParseError(msg, self.peek()[2], self.text)

    # types
    def type_(self) -> Type:
        left = self.type_atom()
        if self.peek()[0] == "arrow":
            self.next()
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> Type:
        kind, val, pos = self.next()
        if kind == "ident" and val in _BASE_NAMES:
            return _BASE_NAMES[val]
        if val == "(":
            t = self.type_()
            self.expect(")")
            return t
        raise ParseError(f"expected a type, found {val or 'end of input'!r}", pos, self.text)

    # terms
    def term(self) -> Term:
        if self.peek()[1] == "\\":
            self.next()
            kind, name, pos = self.next()
            if kind != "ident" or name in _KEYWORDS:
                raise ParseError("expected a variable name after lambda", pos, self.text)
            self.expect(":")
            ty = self.type_()
            self.expect(".")
            return Lam(name, ty, self.term())
        head = self.atom()
        while self._starts_atom():
            head = App(head, self.atom())
        if self.peek()[1] == "\\":
            head = App(head, self.term())
        return head

    def _starts_atom(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("ident", "num") or val == "("

    def atom(self) -> Term:
        kind, val, pos = self.next()
        if kind == "num":
            return Num(int(val))
        if kind == "ident":
            if val == "omega":
                return OMEGA
            if val == "Y":
                self.expect("[")
                t = self.type_()
                self.expect("]")
                return Y(t)
            if val == "case":
                self.expect("[")
                k_tok = self.next()
                if k_tok[0] != "num":
                    raise ParseError("expected case arity", k_tok[2], self.text)
                self.expect("]")
                return CaseK(int(k_tok[1]))
            return Var(val)
        if val == "(":
            m = self.term()
            self.expect(")")
            return m
        raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos, self.text)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    m = p.term()
    if p.peek()[0] != "eof":
        p.error(f"unexpected {p.peek()[1]!r}")
    return m


def parse_type(text: str) -> Type:
    p = _Parser(text)
    t = p.type_()
    if p.peek()[0] != "eof":
        p.error(f"unexpected {p.peek()[1]!r}")
    return t


def parse(text: str, kind: str = "term") -> Term | Type:
    """Parse a term (default) or, with ``kind="type"``, a type."""
    if kind == "type":
        return parse_type(text)
    return parse_term(text)


# ---------------------------------------------------------------------------
# Typing

class PCFTypeError(TypeError):
    pass


TypingContext = Sequence[tuple[str, Type]]


def constant_type(m: Term) -> Type | None:
    if isinstance(m, (Num, Omega)):
        return NAT
    if isinstance(m, Y):
        return Arrow(Arrow(m.at, m.at), m.at)
    if isinstance(m, CaseK):
        return arrow(*([NAT] * (m.k + 2)))
    return None


def typecheck(ctx: TypingContext, m: Term) -> Type:
    """The unique simple type of ``m`` under ``ctx`` (later bindings shadow)."""
    env = dict(ctx)
    names = [n for n, _ in ctx]
    if len(set(names)) != len(names):
        raise PCFTypeError("typing context has repeated names")
    return _tc(env, m)


def _tc(env: dict, m: Term) -> Type:
    if isinstance(m, Var):
        if m.name not in env:
            raise PCFTypeError(f"unbound variable {m.name}")
        return env[m.name]
    if isinstance(m, Lam):
        inner = dict(env)
        inner[m.name] = m.annotation
        return Arrow(m.annotation, _tc(inner, m.body))
    if isinstance(m, App):
        ft = _tc(env, m.fn)
        at = _tc(env, m.arg)
        if not isinstance(ft, Arrow):
            raise PCFTypeError(f"cannot apply a term of type {ft}: {show(m)}")
        if ft.domain != at:
            raise PCFTypeError(f"argument type mismatch: expected {ft.domain}, got {at} in {show(m)}")
        return ft.codomain
    if isinstance(m, CaseK) and m.k < 0:
        raise PCFTypeError("case arity must be non-negative")
    if isinstance(m, Num) and m.n < 0:
        raise PCFTypeError("numerals are natural numbers")
    t = constant_type(m)
    if t is None:
        raise PCFTypeError(f"not a term: {m!r}")
    return t


def is_pure(m: Term) -> bool:
    """True for terms of the pure calculus (variables, lambda, application over iota)."""
    if isinstance(m, Var):
        return True
    if isinstance(m, Lam):
        return _pure_type(m.annotation) and is_pure(m.body)
    if isinstance(m, App):
        return is_pure(m.fn) and is_pure(m.arg)
    return False


def _pure_type(t: Type) -> bool:
    if isinstance(t, Arrow):
        return _pure_type(t.domain) and _pure_type(t.codomain)
    return isinstance(t, Iota)


# ---------------------------------------------------------------------------
# Reduction and structural congruence

def _one_step_reducts(m: Term) -> list[Term]:
    """All terms reachable by one beta, eta-contraction or Y-unfolding step."""
    out = []
    if isinstance(m, App):
        if isinstance(m.fn, Lam):
            out.append(subst(m.fn.body, m.fn.name, m.arg))
        if isinstance(m.fn, Y):
            out.append(App(m.arg, m))
        out.extend(App(f, m.arg) for f in _one_step_reducts(m.fn))
        out.extend(App(m.fn, a) for a in _one_step_reducts(m.arg))
    elif isinstance(m, Lam):
        b = m.body
        if isinstance(b, App) and b.arg == Var(m.name) and m.name not in free_vars(b.fn):
            out.append(b.fn)
        out.extend(Lam(m.name, m.annotation, r) for r in _one_step_reducts(b))
    return out


def beta_step(m: Term) -> Term | None:
    """One leftmost-outermost beta step, or None if ``m`` is beta-normal."""
    if isinstance(m, App):
        if isinstance(m.fn, Lam):
            return subst(m.fn.body, m.fn.name, m.arg)
        r = beta_step(m.fn)
        if r is not None:
            return App(r, m.arg)
        r = beta_step(m.arg)
        if r is not None:
            return App(m.fn, r)
        return None
    if isinstance(m, Lam):
        r = beta_step(m.body)
        return None if r is None else Lam(m.name, m.annotation, r)
    return None


def _normal_order(m: Term, budget: int) -> Term | None:
    """Beta-normalize then eta-contract; None if the budget runs out."""
    for _ in range(budget):
        r = beta_step(m)
        if r is None:
            return eta_contract(m)
        m = r
    return None


def eta_contract(m: Term) -> Term:
    if isinstance(m, App):
        return App(eta_contract(m.fn), eta_contract(m.arg))
    if isinstance(m, Lam):
        body = eta_contract(m.body)
        if isinstance(body, App) and body.arg == Var(m.name) and m.name not in free_vars(body.fn):
            return body.fn
        return Lam(m.name, m.annotation, body)
    return m


_FRONTIER_CAP = 4000


def struct_equiv(m: Term, n: Term, budget: int) -> str:
    """Semi-decide ``m == n`` modulo beta, eta and ``Y M = M (Y M)``.

    Returns ``"equivalent"`` when both sides reach alpha-equal terms within
    ``budget`` steps each, otherwise ``"not-shown"``.
    """
    seen_m = _reducts_within(m, budget)
    seen_n = _reducts_within(n, budget)
    if seen_m.keys() & seen_n.keys():
        return "equivalent"
    nm = _normal_order(m, budget)
    nn = _normal_order(n, budget)
    if nm is not None and nn is not None and alpha_eq(nm, nn):
        return "equivalent"
    return "not-shown"


def _reducts_within(m: Term, budget: int) -> dict:
    seen = {alpha_key(m): m}
    frontier = deque([(m, 0)])
    while frontier and len(seen) < _FRONTIER_CAP:
        t, d = frontier.popleft()
        if d >= budget:
            continue
        for r in _one_step_reducts(t):
            k = alpha_key(r)
            if k not in seen:
                seen[k] = r
                frontier.append((r, d + 1))
    return seen


def read_pcf_file(path) -> Term:
    with open(path, encoding="utf-8") as fh:
        return parse_term(fh.read())
