"""Arenas for simple types, with integer move ids and path addresses.

The arena of ``T1 -> ... -> Tk -> b`` has a root question (an Opponent
move) whose answers are the window values ``0..N-1`` when ``b`` is nat and
nothing when ``b`` is iota.  Under the root hang the arenas of ``T1..Tk``
with polarities swapped; argument ``i`` lives at path ``(i,)``.  Curried and
uncurried forms of a type therefore give the same arena.

Addresses: the question at path ``(i, j)`` is ``?i.j`` (root: ``?``); the
answer ``n`` to it is ``!i.j=n`` (root: ``!=n``).
"""
from __future__ import annotations

from functools import lru_cache

from .syntax import Arrow, Iota, Nat, Type, arrow, uncurry_type


class Arena:
    """A finite forest of moves rooted at a single initial O-question."""

    def __init__(self, ftype: Type, window: int):
        if window < 1:
            raise ValueError("window must be at least 1")
        self.type = ftype
        self.window = window
        self.path: list[tuple[int, ...]] = []
        self.value: list[int] = []          # answer value, -1 for questions
        self.parent: list[int] = []         # enabling move, -1 for the root
        self.question_of: list[int] = []    # answers: the question; questions: self
        self.is_opponent: list[bool] = []
        self.children: list[list[int]] = []  # child questions, by argument index
        self.answers: list[list[int]] = []   # answer ids indexed by value
        self.qtype: list[Type | None] = []
        self.by_path: dict[tuple[int, ...], int] = {}
        self._add_question(ftype, (), -1, True)
        self.size = len(self.path)
        # moves Opponent may play right after each move (empty after O-moves)
        self.o_moves: list[list[int]] = [
            [] if self.is_opponent[m] else self.answers[m] + self.children[m]
            for m in range(self.size)
        ]

    def _add_question(self, t: Type, path, parent: int, is_o: bool) -> int:
        q = self._new(path, -1, parent, is_o, t)
        self.question_of[q] = q
        self.by_path[path] = q
        args, base = uncurry_type(t)
        if isinstance(base, Nat):
            for n in range(self.window):
                a = self._new(path, n, q, not is_o, None)
                self.question_of[a] = q
                self.answers[q].append(a)
        elif not isinstance(base, Iota):
            raise TypeError(f"unknown base type {base!r}")
        for i, at in enumerate(args, 1):
            c = self._add_question(at, path + (i,), q, not is_o)
            self.children[q].append(c)
        return q

    def _new(self, path, value, parent, is_o, qtype) -> int:
        self.path.append(path)
        self.value.append(value)
        self.parent.append(parent)
        self.question_of.append(-1)
        self.is_opponent.append(is_o)
        self.children.append([])
        self.answers.append([])
        self.qtype.append(qtype)
        return len(self.path) - 1

    # ------------------------------------------------------------------
    def is_question(self, m: int) -> bool:
        return self.value[m] < 0

    def address(self, m: int) -> str:
        p = ".".join(map(str, self.path[m]))
        if self.value[m] < 0:
            return "?" + p
        return f"!{p}={self.value[m]}"

    def move_of_address(self, addr: str) -> int:
        addr = addr.strip()
        try:
            if addr.startswith("?"):
                return self.by_path[_parse_path(addr[1:])]
            if addr.startswith("!"):
                p, v = addr[1:].split("=")
                q = self.by_path[_parse_path(p)]
                return self.answers[q][int(v)]
        except (KeyError, IndexError, ValueError):
            pass
        raise ValueError(f"no move {addr!r} in the arena of {self.type} (window {self.window})")

    def answer(self, q: int, n: int) -> int:
        return self.answers[q][n]

    def node(self, path: tuple[int, ...], value: int = -1) -> int:
        q = self.by_path[path]
        return q if value < 0 else self.answers[q][value]

    def enables(self, m: int, n: int) -> bool:
        return self.parent[n] == m

    def __repr__(self) -> str:
        return f"Arena({self.type}, window={self.window}, moves={self.size})"


def _parse_path(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(".")) if s else ()


@lru_cache(maxsize=None)
def arena_of_type(t: Type, window: int) -> Arena:
    """The arena of ``t``.  Cached: arenas are never mutated after construction."""
    return Arena(t, window)


def flat_type(dom: tuple[Type, ...], cod: Type) -> Type:
    """``dom1 -> ... -> domk -> cod``; the arena of a map ``!dom -> cod``."""
    return arrow(*dom, cod) if dom else cod


def arena_of_map(dom: tuple[Type, ...], cod: Type, window: int) -> Arena:
    return arena_of_type(flat_type(dom, cod), window)


def is_flat(t: Type) -> bool:
    return isinstance(t, Nat)


__all__ = ["Arena", "arena_of_type", "arena_of_map", "flat_type", "is_flat", "Arrow"]
