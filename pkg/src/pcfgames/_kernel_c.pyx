# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled interaction kernel; same algorithm and tables as ``_kernel_py``."""
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memset

from ._kernel_py import KernelBudgetExceeded

cdef enum:
    EXT = 0
    GN = 1
    GJ = 2
    GT = 3
    TID = 4
    TN = 5
    TJ = 6
    TT = 7
    REG = 8
    W = 9


cdef int *_int_table(object seq, int width) except NULL:
    cdef Py_ssize_t n = len(seq), i, j
    cdef int *out = <int *> malloc(sizeof(int) * (n * width + 1))
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        row = seq[i]
        if width == 1:
            out[i] = row
        else:
            for j in range(width):
                out[i * width + j] = row[j]
    return out


cdef class _Run:
    cdef int *log
    cdef int nlog, cap
    cdef int *thread_i
    cdef int nthreads, tcap
    cdef int *ext_entry
    cdef int *ext_key
    cdef int next_, ecap
    cdef int *seq
    cdef int *posmap
    cdef int *stamp
    cdef int stamp_now
    cdef long steps, budget
    cdef int m
    cdef int *g_route
    cdef int **f_route
    cdef int *comp_to_g
    cdef int **gamma_to_f
    cdef int **direct_inv
    cdef int *g_is_o
    cdef int **f_is_o
    cdef object g_vf
    cdef list f_vfs
    cdef list comp_o_moves

    def __cinit__(self, plan, long budget):
        cdef int i
        self.budget = budget
        self.steps = 0
        self.cap = 64
        self.log = <int *> malloc(sizeof(int) * W * self.cap)
        self.seq = <int *> malloc(sizeof(int) * self.cap)
        self.posmap = <int *> malloc(sizeof(int) * self.cap)
        self.stamp = <int *> malloc(sizeof(int) * self.cap)
        memset(self.stamp, 0, sizeof(int) * self.cap)
        self.stamp_now = 0
        self.nlog = 0
        self.tcap = 16
        self.thread_i = <int *> malloc(sizeof(int) * self.tcap)
        self.thread_i[0] = -1
        self.nthreads = 1
        self.ecap = 16
        self.ext_entry = <int *> malloc(sizeof(int) * self.ecap)
        self.ext_key = <int *> malloc(sizeof(int) * 2 * self.ecap)
        self.next_ = 0
        self.g_vf = plan.g_vf
        self.f_vfs = list(plan.f_vfs)
        self.comp_o_moves = list(plan.comp_o_moves)
        self.m = len(plan.f_vfs)
        self.g_route = _int_table(plan.g_route, 3)
        self.comp_to_g = _int_table(plan.comp_to_g, 1)
        self.g_is_o = _int_table([1 if b else 0 for b in plan.g_is_o], 1)
        self.f_route = <int **> malloc(sizeof(int *) * (self.m + 1))
        self.gamma_to_f = <int **> malloc(sizeof(int *) * (self.m + 1))
        self.direct_inv = <int **> malloc(sizeof(int *) * (self.m + 1))
        self.f_is_o = <int **> malloc(sizeof(int *) * (self.m + 1))
        for i in range(self.m):
            self.f_route[i] = NULL
            self.gamma_to_f[i] = NULL
            self.direct_inv[i] = NULL
            self.f_is_o[i] = NULL
            if plan.f_route[i] is not None:
                self.f_route[i] = _int_table(plan.f_route[i], 2)
                self.gamma_to_f[i] = _int_table(plan.gamma_to_f[i], 1)
                self.f_is_o[i] = _int_table([1 if b else 0 for b in plan.f_is_o[i]], 1)
            if plan.direct_inv[i] is not None:
                self.direct_inv[i] = _int_table(plan.direct_inv[i], 1)

    def __dealloc__(self):
        cdef int i
        free(self.log)
        free(self.seq)
        free(self.posmap)
        free(self.stamp)
        free(self.thread_i)
        free(self.ext_entry)
        free(self.ext_key)
        free(self.g_route)
        free(self.comp_to_g)
        free(self.g_is_o)
        if self.f_route != NULL:
            for i in range(self.m):
                free(self.f_route[i])
                free(self.gamma_to_f[i])
                free(self.direct_inv[i])
                free(self.f_is_o[i])
        free(self.f_route)
        free(self.gamma_to_f)
        free(self.direct_inv)
        free(self.f_is_o)

    cdef int new_entry(self) except -1:
        cdef int k, old
        if self.nlog == self.cap:
            old = self.cap
            self.cap *= 2
            self.log = <int *> realloc(self.log, sizeof(int) * W * self.cap)
            self.seq = <int *> realloc(self.seq, sizeof(int) * self.cap)
            self.posmap = <int *> realloc(self.posmap, sizeof(int) * self.cap)
            self.stamp = <int *> realloc(self.stamp, sizeof(int) * self.cap)
            if self.log == NULL or self.seq == NULL or self.posmap == NULL or self.stamp == NULL:
                raise MemoryError()
            memset(self.stamp + old, 0, sizeof(int) * (self.cap - old))
        for k in range(W):
            self.log[self.nlog * W + k] = -1
        self.nlog += 1
        return self.nlog - 1

    cdef int push_ext(self, int n, int comp, int ej) except -1:
        if self.next_ == self.ecap:
            self.ecap *= 2
            self.ext_entry = <int *> realloc(self.ext_entry, sizeof(int) * self.ecap)
            self.ext_key = <int *> realloc(self.ext_key, sizeof(int) * 2 * self.ecap)
            if self.ext_entry == NULL or self.ext_key == NULL:
                raise MemoryError()
        self.log[n * W + EXT] = self.next_
        self.ext_entry[self.next_] = n
        self.ext_key[2 * self.next_] = comp
        self.ext_key[2 * self.next_ + 1] = ej
        self.next_ += 1
        return n

    cdef int push_thread(self, int i) except -1:
        if self.nthreads == self.tcap:
            self.tcap *= 2
            self.thread_i = <int *> realloc(self.thread_i, sizeof(int) * self.tcap)
            if self.thread_i == NULL:
                raise MemoryError()
        self.thread_i[self.nthreads] = i
        self.nthreads += 1
        return self.nthreads - 1

    cdef tuple view(self, int c, int e, int *nseq):
        cdef int idx = e, n = 0, j, k, nf, jf
        cdef int *is_o
        cdef int *log = self.log
        if c == 0:
            is_o = self.g_is_o
            nf = GN
            jf = GJ
            while True:
                self.seq[n] = idx
                n += 1
                if is_o[log[idx * W + GN]]:
                    j = log[idx * W + GJ]
                    if j < 0:
                        break
                    idx = j
                else:
                    idx = log[idx * W + GT]
        else:
            is_o = self.f_is_o[self.thread_i[c]]
            nf = TN
            jf = TJ
            while True:
                self.seq[n] = idx
                n += 1
                if is_o[log[idx * W + TN]]:
                    j = log[idx * W + TJ]
                    if j < 0:
                        break
                    idx = j
                else:
                    idx = log[idx * W + TT]
        # reverse in place
        for k in range(n // 2):
            j = self.seq[k]
            self.seq[k] = self.seq[n - 1 - k]
            self.seq[n - 1 - k] = j
        self.stamp_now += 1
        for k in range(n):
            self.posmap[self.seq[k]] = k
            self.stamp[self.seq[k]] = self.stamp_now
        key = [0] * (2 * n)
        for k in range(n):
            idx = self.seq[k]
            key[2 * k] = log[idx * W + nf]
            j = log[idx * W + jf]
            if j < 0:
                key[2 * k + 1] = -1
            else:
                if self.stamp[j] != self.stamp_now:
                    raise ValueError("justifier outside the view: strategy is not innocent")
                key[2 * k + 1] = self.posmap[j]
        nseq[0] = n
        return tuple(key)

    cdef int emit(self, int n, int comp, int J) except -2:
        cdef int ej
        if J < 0:
            ej = -1
        else:
            ej = self.log[J * W + EXT]
            if ej < 0:
                ej = 0
        return self.push_ext(n, comp, ej)

    cdef int run(self, int c, int e) except -2:
        cdef int n, m, ptr, J, kind, x, y, t, nseq
        cdef int *ent
        cdef int *route
        while True:
            self.steps += 1
            if self.steps > self.budget:
                raise KernelBudgetExceeded(f"interaction exceeded {self.budget} steps")
            key = self.view(c, e, &nseq)
            if c == 0:
                r = self.g_vf.get(key)
            else:
                r = self.f_vfs[self.thread_i[c]].get(key)
            if r is None:
                return -1
            m = r[0]
            ptr = r[1]
            J = self.seq[ptr]
            n = self.new_entry()
            ent = self.log + n * W
            if c == 0:
                ent[GN] = m
                ent[GJ] = J
                ent[GT] = e
                kind = self.g_route[3 * m]
                x = self.g_route[3 * m + 1]
                y = self.g_route[3 * m + 2]
                if kind == 0:
                    return self.emit(n, x, J)
                if kind == 2:
                    ent[REG] = x
                    return self.emit(n, y, J)
                if y == 0:
                    t = self.push_thread(x)
                    ent = self.log + n * W
                    ent[TID] = t
                    ent[TN] = 0
                    ent[TJ] = -1
                else:
                    t = self.log[J * W + TID]
                    ent[TID] = t
                    ent[TN] = y
                    ent[TJ] = J
                c = t
                e = n
            else:
                ent[TID] = c
                ent[TN] = m
                ent[TJ] = J
                ent[TT] = e
                route = self.f_route[self.thread_i[c]]
                kind = route[2 * m]
                x = route[2 * m + 1]
                if kind == 0:
                    return self.emit(n, x, J)
                ent[GN] = x
                ent[GJ] = J
                c = 0
                e = n

    cdef int feed(self, int comp, int jpos) except -2:
        cdef int n = self.new_entry(), E, reg, t
        self.push_ext(n, comp, jpos)
        if jpos < 0:
            self.log[n * W + GN] = 0
            return self.run(0, n)
        E = self.ext_entry[jpos]
        if self.log[E * W + GN] >= 0:
            reg = self.log[E * W + REG]
            if reg >= 0:
                self.log[n * W + GN] = self.direct_inv[reg][comp]
                self.log[n * W + REG] = reg
            else:
                self.log[n * W + GN] = self.comp_to_g[comp]
            self.log[n * W + GJ] = E
            return self.run(0, n)
        t = self.log[E * W + TID]
        self.log[n * W + TID] = t
        self.log[n * W + TN] = self.gamma_to_f[self.thread_i[t]][comp]
        self.log[n * W + TJ] = E
        return self.run(t, n)

    cdef tuple ext_tuple(self, int upto):
        return tuple([self.ext_key[k] for k in range(upto)])

    cdef int explore(self, dict out) except -1:
        cdef int L = self.next_
        cdef int last = self.ext_key[2 * L - 2]
        cdef int nlog = self.nlog, nthreads = self.nthreads, r, mv
        cands = self.comp_o_moves[last]
        for mv in cands:
            r = self.feed(mv, L - 1)
            if r >= 0:
                out[self.ext_tuple(2 * self.next_ - 2)] = (
                    self.ext_key[2 * self.next_ - 2], self.ext_key[2 * self.next_ - 1])
                self.explore(out)
            self.nlog = nlog
            self.nthreads = nthreads
            self.next_ = L
        return 0


def compose_views(plan, long budget):
    cdef _Run run = _Run(plan, budget)
    out = {}
    if run.feed(0, -1) < 0:
        return out
    out[(0, -1)] = (run.ext_key[0 + 2], run.ext_key[3])
    run.explore(out)
    return out


def first_response(plan, long budget):
    cdef _Run run = _Run(plan, budget)
    if run.feed(0, -1) < 0:
        return None
    return run.ext_key[2], run.ext_key[3]
