"""Big-step evaluation of PCF programs with a fuel bound.

The evaluator is a call-by-name environment machine.  Each beta step, each
``Y`` unfolding and each firing of the ``case`` rule costs one unit of fuel.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

from .syntax import App, CaseK, Lam, Num, Omega, Term, Var, Y

log = logging.getLogger(__name__)

DEFAULT_FUEL = 100_000


@dataclass(frozen=True)
class Converges:
    n: int


@dataclass(frozen=True)
class FuelExhausted:
    """No derivation found.  ``reason`` is ``"fuel"`` or ``"stuck"``."""
    reason: str = "fuel"


Outcome = Union[Converges, FuelExhausted]


class _Env:
    __slots__ = ("name", "clo", "up")

    def __init__(self, name, clo, up):
        self.name = name
        self.clo = clo
        self.up = up

    def lookup(self, name):
        e = self
        while e is not None:
            if e.name == name:
                return e.clo
            e = e.up
        raise KeyError(name)


class _CaseFrame:
    __slots__ = ("branches",)

    def __init__(self, branches):
        self.branches = branches


def evaluate(p: Term, fuel: int = DEFAULT_FUEL) -> Outcome:
    """Evaluate a closed program of type nat.

    A ``case[k]`` whose scrutinee evaluates to ``i >= k`` has no applicable
    rule and is reported like divergence, as is ``omega``.
    """
    term, env = p, None
    stack: list = []
    steps = 0
    while True:
        if isinstance(term, App):
            arg = term.arg
            # share the closure a variable already denotes; avoids indirection chains
            stack.append(env.lookup(arg.name) if isinstance(arg, Var) else (arg, env))
            term = term.fn
            continue
        if isinstance(term, Var):
            term, env = env.lookup(term.name)
            continue
        if isinstance(term, Lam):
            if not stack or isinstance(stack[-1], _CaseFrame):
                return FuelExhausted("stuck")
            if steps >= fuel:
                return FuelExhausted("fuel")
            steps += 1
            clo = stack.pop()
            env = _Env(term.name, clo, env)
            term = term.body
            continue
        if isinstance(term, Y):
            if not stack or isinstance(stack[-1], _CaseFrame):
                return FuelExhausted("stuck")
            if steps >= fuel:
                return FuelExhausted("fuel")
            steps += 1
            fn_clo = stack.pop()
            # Y M -> M (Y M)
            self_clo = (App(term, Var("#m")), _Env("#m", fn_clo, None))
            stack.append(self_clo)
            term, env = fn_clo
            continue
        if isinstance(term, CaseK):
            k = term.k
            if len(stack) < k + 1 or any(isinstance(s, _CaseFrame) for s in stack[-(k + 1):]):
                return FuelExhausted("stuck")
            args = [stack.pop() for _ in range(k + 1)]
            scrutinee, branches = args[0], args[1:]
            stack.append(_CaseFrame(branches))
            term, env = scrutinee
            continue
        if isinstance(term, Num):
            if not stack:
                log.debug("converged to %d after %d steps", term.n, steps)
                return Converges(term.n)
            top = stack[-1]
            if not isinstance(top, _CaseFrame):
                return FuelExhausted("stuck")
            stack.pop()
            if term.n >= len(top.branches):
                return FuelExhausted("stuck")
            if steps >= fuel:
                return FuelExhausted("fuel")
            steps += 1
            term, env = top.branches[term.n]
            continue
        if isinstance(term, Omega):
            return FuelExhausted("stuck")
        raise TypeError(f"not a term: {term!r}")
