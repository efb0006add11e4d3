# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled assignment kernels (exhaustive search and branch-and-bound).

Mirrors ``_fallback`` exactly: same inputs, same labels, same statistics.
"""

import numpy as np
cimport numpy as cnp

ctypedef long long i64

cnp.import_array()


def es_assign(X, C):
    cdef const i64[:, ::1] x = np.ascontiguousarray(X, dtype=np.int64)
    cdef const i64[:, ::1] c = np.ascontiguousarray(C, dtype=np.int64)
    cdef Py_ssize_t d = x.shape[0], m = x.shape[1], k = c.shape[0]
    out = np.empty(d, dtype=np.int64)
    cdef i64[::1] lab = out
    cdef Py_ssize_t i, y, t
    cdef i64 best, dist, diff, arg
    with nogil:
        for i in range(d):
            best = -1
            arg = 0
            for y in range(k):
                dist = 0
                for t in range(m):
                    diff = x[i, t] - c[y, t]
                    dist = dist + diff * diff
                if best < 0 or dist < best:
                    best = dist
                    arg = y
            lab[i] = arg
    return out


cdef class _Tree:
    cdef const i64[:, ::1] x
    cdef const i64[:, ::1] c
    cdef i64[:, :, ::1] suffix   # (k, m+1, m): sorted(C[y, t:]) left-aligned
    cdef i64[:, ::1] fixed       # (m+1, k): prefix distance per depth/centroid
    cdef i64[:, ::1] surv        # (m+1, k): survivors per depth
    cdef i64[::1] nsurv
    cdef i64[::1] used
    cdef i64[::1] rem
    cdef i64[::1] lb
    cdef i64[::1] ub
    cdef i64[::1] alive
    cdef i64[::1] labels
    cdef double eps
    cdef Py_ssize_t m, k
    cdef public i64 created, expanded, max_depth, eliminations, leaf_fallbacks

    def __init__(self, X, C, double eps):
        self.x = X
        self.c = C
        self.m = X.shape[1]
        self.k = C.shape[0]
        self.eps = eps
        m, k = self.m, self.k
        suf = np.zeros((k, m + 1, m), dtype=np.int64)
        for y in range(k):
            for t in range(m + 1):
                s = np.sort(C[y, t:])
                suf[y, t, : s.size] = s
        self.suffix = suf
        self.fixed = np.zeros((m + 1, k), dtype=np.int64)
        self.surv = np.zeros((m + 1, k), dtype=np.int64)
        self.nsurv = np.zeros(m + 1, dtype=np.int64)
        self.used = np.zeros(m + 1, dtype=np.int64)
        self.rem = np.zeros(m + 1, dtype=np.int64)
        self.lb = np.zeros(k, dtype=np.int64)
        self.ub = np.zeros(k, dtype=np.int64)
        self.alive = np.zeros(k, dtype=np.int64)
        self.labels = np.full(X.shape[0], -1, dtype=np.int64)
        self.created = self.expanded = self.max_depth = 0
        self.eliminations = self.leaf_fallbacks = 0

    cdef void expand(self, Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t t) noexcept nogil:
        cdef Py_ssize_t r = lo, s, q, p, i, y, depth = t + 1, nrem, ns, nc, best_q
        cdef i64 j, f, a, lbv, ubv, minub, diff
        cdef bint have
        self.expanded += 1
        ns = self.nsurv[t]
        while r < hi:
            j = self.x[r, t]
            s = r
            while r < hi and self.x[r, t] == j:
                r += 1
            self.created += 1
            if depth > self.max_depth:
                self.max_depth = depth
            self.used[j] = 1
            nrem = 0
            for i in range(1, self.m + 1):
                if not self.used[i]:
                    self.rem[nrem] = i
                    nrem += 1
            for q in range(ns):
                y = self.surv[t, q]
                diff = self.c[y, t] - j
                f = self.fixed[t, y] + diff * diff
                self.fixed[depth, y] = f
                lbv = f
                ubv = f
                for i in range(nrem):
                    a = self.suffix[y, depth, i]
                    diff = a - self.rem[i]
                    lbv = lbv + diff * diff
                    diff = a - self.rem[nrem - 1 - i]
                    ubv = ubv + diff * diff
                self.lb[q] = lbv
                self.ub[q] = ubv
                self.alive[q] = 1
            for q in range(ns - 1, -1, -1):
                have = False
                minub = 0
                for p in range(ns):
                    if p != q and self.alive[p]:
                        if not have or self.ub[p] < minub:
                            minub = self.ub[p]
                            have = True
                if have and <double>self.lb[q] >= <double>minub - self.eps:
                    self.alive[q] = 0
                    self.eliminations += 1
            nc = 0
            best_q = -1
            for q in range(ns):
                if self.alive[q]:
                    self.surv[depth, nc] = self.surv[t, q]
                    nc += 1
                    if best_q < 0 or self.lb[q] < self.lb[best_q]:
                        best_q = q
            self.nsurv[depth] = nc
            if nc == 1:
                y = self.surv[depth, 0]
                for i in range(s, r):
                    self.labels[i] = y
            elif depth == self.m:
                y = self.surv[t, best_q]
                for i in range(s, r):
                    self.labels[i] = y
                self.leaf_fallbacks += 1
            else:
                self.expand(s, r, depth)
            self.used[j] = 0


def bnb_assign(X, C, double epsilon):
    """Labels for lexicographically sorted ``X``; see ``_fallback.bnb_assign``."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    C = np.ascontiguousarray(C, dtype=np.int64)
    cdef Py_ssize_t d = X.shape[0], k = C.shape[0]
    if d == 0:
        return np.full(0, -1, dtype=np.int64), (0, 0, 0, 0, 0)
    if k == 1:
        return np.zeros(d, dtype=np.int64), (0, 0, 0, 0, 0)
    cdef _Tree tree = _Tree(X, C, epsilon)
    cdef Py_ssize_t y
    for y in range(k):
        tree.surv[0, y] = y
    tree.nsurv[0] = k
    with nogil:
        tree.expand(0, d, 0)
    stats = (tree.created, tree.expanded, tree.max_depth, tree.eliminations, tree.leaf_fallbacks)
    return np.asarray(tree.labels), tuple(int(v) for v in stats)
