# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact-cover kernel.

Bit-identical twin of ``mubkit._cover_py.solve_cover``: same alive-row
bookkeeping, column rule, candidate order, RNG stream and stop conditions,
so results from the two kernels are interchangeable. Keep any behavioural
change mirrored there.
"""

from libc.stdint cimport int32_t, int64_t, uint64_t
from libc.stdlib cimport free, malloc

import numpy as np

ctypedef uint64_t u64

cdef int _RULE_LEX = 0

RULE_LEX = 0
RULE_MRV = 1

KERNEL = "compiled"


cdef inline u64 _mix64(u64 seed) noexcept nogil:
    cdef u64 z = seed + <u64>0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    z = z ^ (z >> 31)
    if z == 0:
        z = <u64>0xD1B54A32D192ED03
    return z


cdef inline int _bit_index(u64 b) noexcept nogil:
    # index of the single set bit in b (de Bruijn-free simple loop variant)
    cdef int i = 0
    while not (b & 1):
        b >>= 1
        i += 1
    return i


cdef class _Search:
    cdef:
        const u64[:, ::1] masks
        const u64[:, ::1] adj
        const int32_t[::1] indptr
        const int32_t[::1] prows
        const int32_t[::1] rindptr
        const int32_t[::1] rpoints
        const int32_t[::1] cats
        int32_t* quota
        int32_t* cat_count
        int32_t* count
        u64* covered
        u64* full
        u64* alive
        int32_t* selected
        int32_t* cand
        int32_t* trail
        int trail_len
        int n_points, n_rows, n_words, n_row_words, max_cands, depth, column_rule
        bint use_quota, randomize
        u64 rng
        int64_t nodes, budget, max_solutions
        bint aborted, done
        list solutions

    def __cinit__(self):
        self.quota = NULL
        self.cat_count = NULL
        self.count = NULL
        self.covered = NULL
        self.full = NULL
        self.alive = NULL
        self.selected = NULL
        self.cand = NULL
        self.trail = NULL

    def __dealloc__(self):
        free(self.quota)
        free(self.cat_count)
        free(self.count)
        free(self.covered)
        free(self.full)
        free(self.alive)
        free(self.selected)
        free(self.cand)
        free(self.trail)

    cdef inline bint _is_covered(self, int p) noexcept nogil:
        return (self.covered[p >> 6] >> (p & 63)) & <u64>1

    cdef inline bint _is_alive(self, int r) noexcept nogil:
        return (self.alive[r >> 6] >> (r & 63)) & <u64>1

    cdef inline u64 _next_rng(self) noexcept nogil:
        cdef u64 x = self.rng
        x ^= x >> 12
        x ^= x << 25
        x ^= x >> 27
        self.rng = x
        return x * <u64>2685821657736338717

    cdef inline bint _quota_ok(self, int32_t r) noexcept nogil:
        if not self.use_quota:
            return True
        return self.cat_count[self.cats[r]] < self.quota[self.cats[r]]

    cdef int _select(self, int32_t r) noexcept nogil:
        """Kill every alive row sharing a point with r; returns trail offset."""
        cdef int offset = self.trail_len
        cdef int w, s, i
        cdef u64 killed, b
        for w in range(self.n_row_words):
            killed = self.alive[w] & self.adj[r, w]
            if killed == 0:
                continue
            self.alive[w] ^= killed
            while killed:
                b = killed & (~killed + 1)
                s = (w << 6) + _bit_index(b)
                killed ^= b
                self.trail[self.trail_len] = s
                self.trail_len += 1
                for i in range(self.rindptr[s], self.rindptr[s + 1]):
                    self.count[self.rpoints[i]] -= 1
        for w in range(self.n_words):
            self.covered[w] |= self.masks[r, w]
        self.selected[self.depth] = r
        self.depth += 1
        if self.use_quota:
            self.cat_count[self.cats[r]] += 1
        return offset

    cdef void _unselect(self, int32_t r, int offset) noexcept nogil:
        cdef int w, s, i
        if self.use_quota:
            self.cat_count[self.cats[r]] -= 1
        self.depth -= 1
        for w in range(self.n_words):
            self.covered[w] ^= self.masks[r, w]
        while self.trail_len > offset:
            self.trail_len -= 1
            s = self.trail[self.trail_len]
            self.alive[s >> 6] |= (<u64>1) << (s & 63)
            for i in range(self.rindptr[s], self.rindptr[s + 1]):
                self.count[self.rpoints[i]] += 1

    cdef int _choose_column(self) noexcept nogil:
        cdef int p, best_p = -1
        cdef int32_t c, best_c = -1
        if self.column_rule == _RULE_LEX:
            for p in range(self.n_points):
                if not self._is_covered(p):
                    return p
            return -1
        for p in range(self.n_points):
            if self._is_covered(p):
                continue
            c = self.count[p]
            if best_c < 0 or c < best_c:
                best_p = p
                best_c = c
                if c == 0:
                    break
        return best_p

    cdef void _recurse(self):
        cdef int w, p, i, j, ncand, offset
        cdef int32_t r, tmp
        cdef bint complete = True
        cdef int32_t* buf
        for w in range(self.n_words):
            if self.covered[w] != self.full[w]:
                complete = False
                break
        if complete:
            self.solutions.append(tuple(sorted([self.selected[i] for i in range(self.depth)])))
            if self.max_solutions and len(self.solutions) >= self.max_solutions:
                self.done = True
            return
        p = self._choose_column()
        buf = self.cand + self.depth * self.max_cands
        ncand = 0
        for i in range(self.indptr[p], self.indptr[p + 1]):
            r = self.prows[i]
            if self._is_alive(r) and self._quota_ok(r):
                buf[ncand] = r
                ncand += 1
        if self.randomize:
            for i in range(ncand - 1, 0, -1):
                j = <int>(self._next_rng() % <u64>(i + 1))
                tmp = buf[i]
                buf[i] = buf[j]
                buf[j] = tmp
        for i in range(ncand):
            r = buf[i]
            self.nodes += 1
            if self.budget and self.nodes > self.budget:
                self.aborted = True
                return
            offset = self._select(r)
            self._recurse()
            self._unselect(r, offset)
            if self.aborted or self.done:
                return


def solve_cover(
    masks,
    point_indptr,
    point_rows,
    n_points,
    row_indptr,
    row_points,
    row_adj,
    forced_rows=(),
    categories=None,
    quotas=None,
    *,
    randomize=False,
    seed=1,
    node_budget=0,
    max_solutions=0,
    column_rule=RULE_MRV,
):
    """Compiled counterpart of ``mubkit._cover_py.solve_cover``."""
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    adj = np.ascontiguousarray(row_adj, dtype=np.uint64)
    indptr = np.ascontiguousarray(point_indptr, dtype=np.int32)
    prow_arr = np.ascontiguousarray(point_rows, dtype=np.int32)
    rindptr = np.ascontiguousarray(row_indptr, dtype=np.int32)
    rpoints_arr = np.ascontiguousarray(row_points, dtype=np.int32)
    n_rows = masks.shape[0]
    if categories is None:
        cats_arr = np.zeros(n_rows, dtype=np.int32)
    else:
        cats_arr = np.ascontiguousarray(categories, dtype=np.int32)

    cdef _Search s = _Search()
    s.masks = masks
    s.adj = adj
    s.indptr = indptr
    s.prows = prow_arr
    s.rindptr = rindptr
    s.rpoints = rpoints_arr
    s.cats = cats_arr
    s.n_points = int(n_points)
    s.n_rows = n_rows
    s.n_words = masks.shape[1]
    s.n_row_words = adj.shape[1]
    s.column_rule = int(column_rule)
    s.randomize = bool(randomize)
    s.rng = _mix64(<u64>(int(seed) & ((1 << 64) - 1)))
    s.nodes = 0
    s.budget = int(node_budget)
    s.max_solutions = int(max_solutions)
    s.aborted = False
    s.done = False
    s.depth = 0
    s.trail_len = 0
    s.solutions = []
    s.use_quota = quotas is not None

    cdef int max_cands = 1
    cdef int p
    for p in range(s.n_points):
        if indptr[p + 1] - indptr[p] > max_cands:
            max_cands = indptr[p + 1] - indptr[p]
    s.max_cands = max_cands

    cdef int n_cats = len(quotas) if quotas is not None else 1
    s.covered = <u64*>malloc(s.n_words * sizeof(u64))
    s.full = <u64*>malloc(s.n_words * sizeof(u64))
    s.alive = <u64*>malloc(s.n_row_words * sizeof(u64))
    s.count = <int32_t*>malloc(s.n_points * sizeof(int32_t))
    s.selected = <int32_t*>malloc((s.n_points + 2) * sizeof(int32_t))
    s.cand = <int32_t*>malloc((s.n_points + 2) * max_cands * sizeof(int32_t))
    s.trail = <int32_t*>malloc(n_rows * sizeof(int32_t))
    s.quota = <int32_t*>malloc(n_cats * sizeof(int32_t))
    s.cat_count = <int32_t*>malloc(n_cats * sizeof(int32_t))
    if (s.covered == NULL or s.full == NULL or s.alive == NULL or s.count == NULL
            or s.selected == NULL or s.cand == NULL or s.trail == NULL
            or s.quota == NULL or s.cat_count == NULL):
        raise MemoryError

    cdef int w, r
    for w in range(s.n_words):
        s.covered[w] = 0
        s.full[w] = 0
    for p in range(s.n_points):
        s.full[p >> 6] |= (<u64>1) << (p & 63)
        s.count[p] = indptr[p + 1] - indptr[p]
    for w in range(s.n_row_words):
        s.alive[w] = 0
    for r in range(n_rows):
        s.alive[r >> 6] |= (<u64>1) << (r & 63)
    cdef int c
    for c in range(n_cats):
        s.cat_count[c] = 0
        s.quota[c] = 0
    if quotas is not None:
        for c in range(n_cats):
            s.quota[c] = int(quotas[c])

    cdef int32_t fr
    for r0 in forced_rows:
        fr = <int32_t>int(r0)
        if not s._is_alive(fr) or not s._quota_ok(fr):
            return [], 0, True
        s._select(fr)

    s._recurse()
    return s.solutions, int(s.nodes), not s.aborted and not s.done
