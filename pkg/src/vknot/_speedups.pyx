# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; see ``_fallback`` for the reference versions."""

import numpy as np

ctypedef long long i64


def string_matrix(tails, heads, Py_ssize_t length):
    cdef i64[:] tl = np.ascontiguousarray(tails, dtype=np.int64)
    cdef i64[:] hd = np.ascontiguousarray(heads, dtype=np.int64)
    cdef Py_ssize_t n = tl.shape[0]
    out = np.zeros((n + 1, n + 1), dtype=np.int64)
    if n == 0:
        return out
    cdef i64[:, :] b = out
    tarr = np.zeros((n, n), dtype=np.int8)
    harr = np.zeros((n, n), dtype=np.int8)
    cdef signed char[:, :] t = tarr
    cdef signed char[:, :] h = harr
    cdef Py_ssize_t e, f, g
    cdef i64 span, off, acc, row
    for e in range(n):
        span = (hd[e] - tl[e] + length) % length
        for g in range(n):
            off = (tl[g] - tl[e] + length) % length
            t[e, g] = 1 if (off > 0 and off < span) else 0
            off = (hd[g] - tl[e] + length) % length
            h[e, g] = 1 if (off > 0 and off < span) else 0
    for e in range(n):
        row = 0
        for g in range(n):
            row += t[e, g] - h[e, g]
        b[e + 1, 0] = row
        b[0, e + 1] = -row
        for f in range(e + 1, n):
            acc = t[e, f] - h[e, f]
            for g in range(n):
                acc += t[e, g] * h[f, g] - h[e, g] * t[f, g]
            b[e + 1, f + 1] = acc
            b[f + 1, e + 1] = -acc
    return out


cdef class _Canon:
    cdef i64[:, :] M
    cdef Py_ssize_t m, nfixed, best_len, stamp
    cdef i64[:, :] best
    cdef i64[:, :] blk
    cdef Py_ssize_t[:, :] cand
    cdef Py_ssize_t[:] perm, best_perm, cls, seen
    cdef signed char[:] used

    def __init__(self, M, Py_ssize_t nfixed):
        self.M = M
        self.m = M.shape[0]
        self.nfixed = nfixed
        self.best_len = nfixed
        self.stamp = 0
        self.best = np.zeros((self.m, self.m), dtype=np.int64)
        self.blk = np.zeros((self.m, self.m), dtype=np.int64)
        self.cand = np.zeros((self.m, self.m), dtype=np.intp)
        self.perm = np.arange(self.m, dtype=np.intp)
        self.best_perm = np.arange(self.m, dtype=np.intp)
        self.seen = np.full(self.m, -1, dtype=np.intp)
        self.used = np.zeros(self.m, dtype=np.int8)
        cls = np.arange(self.m, dtype=np.intp)
        first = {}
        for v in range(nfixed, self.m):
            cls[v] = first.setdefault(M[v].tobytes(), v)
        self.cls = cls

    cdef int _cmp_row(self, Py_ssize_t v, Py_ssize_t i):
        # row v restricted to perm[:i] versus blk[i]
        cdef Py_ssize_t j
        cdef i64 x
        for j in range(i):
            x = self.M[v, self.perm[j]]
            if x < self.blk[i, j]:
                return -1
            if x > self.blk[i, j]:
                return 1
        return 0

    cdef int _cmp_best(self, Py_ssize_t i):
        cdef Py_ssize_t j
        for j in range(i):
            if self.blk[i, j] < self.best[i, j]:
                return -1
            if self.blk[i, j] > self.best[i, j]:
                return 1
        return 0

    cdef void rec(self, Py_ssize_t i):
        cdef Py_ssize_t v, j, k, nc = 0, st
        cdef int c
        if i == self.m:
            for j in range(self.m):
                self.best_perm[j] = self.perm[j]
            return
        self.stamp += 1
        st = self.stamp
        for v in range(self.nfixed, self.m):
            if self.used[v] or self.seen[self.cls[v]] == st:
                continue
            self.seen[self.cls[v]] = st
            c = -1 if nc == 0 else self._cmp_row(v, i)
            if c < 0:
                for j in range(i):
                    self.blk[i, j] = self.M[v, self.perm[j]]
                self.cand[i, 0] = v
                nc = 1
            elif c == 0:
                self.cand[i, nc] = v
                nc += 1
        if i < self.best_len:
            c = self._cmp_best(i)
            if c > 0:
                return
            if c < 0:
                for j in range(i):
                    self.best[i, j] = self.blk[i, j]
                self.best_len = i + 1
        else:
            for j in range(i):
                self.best[i, j] = self.blk[i, j]
            self.best_len = i + 1
        for k in range(nc):
            v = self.cand[i, k]
            self.perm[i] = v
            self.used[v] = 1
            self.rec(i + 1)
            self.used[v] = 0


def canonical_perm(b, Py_ssize_t nfixed):
    M = np.ascontiguousarray(b, dtype=np.int64)
    if M.shape[0] == nfixed:
        return np.arange(nfixed, dtype=np.int64)
    canon = _Canon(M, nfixed)
    canon.rec(nfixed)
    return np.asarray(canon.best_perm, dtype=np.int64)
