"""Interaction kernel for composing innocent strategies (pure Python).

``compose_views`` computes the view function of ``<f_1, ..., f_m>^dagger ; g``
by exploring the composite's P-views depth first.  For each P-view it plays
the view itself as an external play and runs the interaction between ``g``
and the threads of the ``f_i`` it spawns, hiding the middle moves.

The interaction log is a stack of entries; exploring a branch appends and
backtracking truncates, so no state is copied.

Route tables (built by ``pcfgames.strategy``):

``g_route[gnode]``
    ``(0, comp, 0)`` visible move; ``(1, i, fnode)`` move in the i-th middle
    component handled by a thread of ``f_i``; ``(2, i, comp)`` move in a
    middle component whose ``f_i`` is a projection, short-circuited to the
    outside.
``f_route[i][fnode]``
    ``(0, comp)`` visible move, ``(1, gnode)`` move seen by ``g``.
``comp_to_g[comp]``
    ``g`` move for a visible move on ``g``'s side, ``-1`` otherwise.
``gamma_to_f[i][comp]`` / ``direct_inv[i][comp]``
    the same visible context move seen from ``f_i`` / from ``g`` through
    projection ``i``.
"""
from __future__ import annotations

# entry layout
EXT, GN, GJ, GT, TID, TN, TJ, TT, REG = range(9)


class KernelBudgetExceeded(RuntimeError):
    pass


class _Run:
    def __init__(self, plan, budget):
        self.p = plan
        self.budget = budget
        self.steps = 0
        self.log: list[list[int]] = []
        self.thread_i: list[int] = [-1]   # thread 0 is g
        self.ext_entry: list[int] = []
        self.ext_key: list[int] = []

    # -- views ---------------------------------------------------------
    def view(self, c, e):
        log = self.log
        seq = []
        idx = e
        if c == 0:
            is_o = self.p.g_is_o
            while True:
                seq.append(idx)
                ent = log[idx]
                if is_o[ent[GN]]:
                    j = ent[GJ]
                    if j < 0:
                        break
                    idx = j
                else:
                    idx = ent[GT]
            nf, jf = GN, GJ
        else:
            is_o = self.p.f_is_o[self.thread_i[c]]
            while True:
                seq.append(idx)
                ent = log[idx]
                if is_o[ent[TN]]:
                    j = ent[TJ]
                    if j < 0:
                        break
                    idx = j
                else:
                    idx = ent[TT]
            nf, jf = TN, TJ
        seq.reverse()
        pos = {entry: k for k, entry in enumerate(seq)}
        key = []
        for idx in seq:
            ent = log[idx]
            key.append(ent[nf])
            j = ent[jf]
            key.append(pos[j] if j >= 0 else -1)
        return seq, tuple(key)

    # -- external moves ------------------------------------------------
    def emit(self, n, comp, J):
        log = self.log
        log[n][EXT] = len(self.ext_entry)
        self.ext_entry.append(n)
        if J < 0:
            ej = -1
        else:
            ej = log[J][EXT]
            if ej < 0:
                ej = 0  # justified by a thread's root: reroute to the outer root
        self.ext_key.append(comp)
        self.ext_key.append(ej)
        return n

    def new_entry(self):
        self.log.append([-1, -1, -1, -1, -1, -1, -1, -1, -1])
        return len(self.log) - 1

    # -- interaction ---------------------------------------------------
    def run(self, c, e):
        """Let component ``c`` answer O-move entry ``e``; follow hidden moves."""
        p = self.p
        log = self.log
        while True:
            self.steps += 1
            if self.steps > self.budget:
                raise KernelBudgetExceeded(f"interaction exceeded {self.budget} steps")
            seq, key = self.view(c, e)
            if c == 0:
                r = p.g_vf.get(key)
            else:
                r = p.f_vfs[self.thread_i[c]].get(key)
            if r is None:
                return -1
            m, ptr = r
            J = seq[ptr]
            n = self.new_entry()
            ent = log[n]
            if c == 0:
                ent[GN] = m
                ent[GJ] = J
                ent[GT] = e
                kind, x, y = p.g_route[m]
                if kind == 0:
                    return self.emit(n, x, J)
                if kind == 2:
                    ent[REG] = x
                    return self.emit(n, y, J)
                if y == 0:
                    self.thread_i.append(x)
                    t = len(self.thread_i) - 1
                    ent[TID] = t
                    ent[TN] = 0
                    ent[TJ] = -1
                else:
                    t = log[J][TID]
                    ent[TID] = t
                    ent[TN] = y
                    ent[TJ] = J
                c, e = t, n
            else:
                ent[TID] = c
                ent[TN] = m
                ent[TJ] = J
                ent[TT] = e
                kind, x = p.f_route[self.thread_i[c]][m]
                if kind == 0:
                    return self.emit(n, x, J)
                ent[GN] = x
                ent[GJ] = J
                c, e = 0, n

    def feed(self, comp, jpos):
        """Opponent plays visible move ``comp`` justified by visible position ``jpos``."""
        log = self.log
        n = self.new_entry()
        ent = log[n]
        ent[EXT] = len(self.ext_entry)
        self.ext_entry.append(n)
        self.ext_key.append(comp)
        self.ext_key.append(jpos)
        if jpos < 0:
            ent[GN] = 0
            return self.run(0, n)
        E = self.ext_entry[jpos]
        src = log[E]
        if src[GN] >= 0:
            reg = src[REG]
            if reg >= 0:
                ent[GN] = self.p.direct_inv[reg][comp]
                ent[REG] = reg
            else:
                ent[GN] = self.p.comp_to_g[comp]
            ent[GJ] = E
            return self.run(0, n)
        t = src[TID]
        ent[TID] = t
        ent[TN] = self.p.gamma_to_f[self.thread_i[t]][comp]
        ent[TJ] = E
        return self.run(t, n)

    def truncate(self, nlog, nthreads, next_):
        del self.log[nlog:]
        del self.thread_i[nthreads:]
        del self.ext_entry[next_:]
        del self.ext_key[2 * next_:]


def compose_views(plan, budget: int) -> dict:
    run = _Run(plan, budget)
    out: dict = {}
    r = run.feed(0, -1)
    if r < 0:
        return out
    out[(0, -1)] = (run.ext_key[-2], run.ext_key[-1])
    _explore(run, plan, out)
    return out


def _explore(run, plan, out):
    L = len(run.ext_entry)
    last = run.ext_key[2 * L - 2]
    cands = plan.comp_o_moves[last]
    if not cands:
        return
    nlog = len(run.log)
    nthreads = len(run.thread_i)
    for m in cands:
        r = run.feed(m, L - 1)
        if r >= 0:
            out[tuple(run.ext_key[:-2])] = (run.ext_key[-2], run.ext_key[-1])
            _explore(run, plan, out)
        run.truncate(nlog, nthreads, L)


def first_response(plan, budget: int):
    """The composite's response to the initial question, or None."""
    run = _Run(plan, budget)
    r = run.feed(0, -1)
    if r < 0:
        return None
    return run.ext_key[-2], run.ext_key[-1]
