# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for enumeration and single-linkage agglomeration.

Semantics are identical to :mod:`bicagg._pykernels`; the test suite runs
both and compares outputs.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free, qsort

cnp.import_array()


cdef struct Keyed:
    double v
    int idx


cdef int _cmp_keyed(const void* a, const void* b) noexcept nogil:
    cdef const Keyed* x = <const Keyed*> a
    cdef const Keyed* y = <const Keyed*> b
    if x.v < y.v:
        return -1
    if x.v > y.v:
        return 1
    return (x.idx > y.idx) - (x.idx < y.idx)


cdef int _cmp_int(const void* a, const void* b) noexcept nogil:
    cdef int x = (<const int*> a)[0]
    cdef int y = (<const int*> b)[0]
    return (x > y) - (x < y)


cdef void _windows(const double[:, ::1] A, int* rows, int L, const int* cols,
                   int ncols, int k, int c, double eps, int min_rows, list out):
    cdef int i, l, r, prev_r, w
    cdef int* sub
    cdef Keyed* buf
    cdef cnp.ndarray[cnp.int32_t, ndim=1] res
    if L < min_rows:
        return
    if k == ncols:
        res = np.empty(L, dtype=np.int32)
        for i in range(L):
            res[i] = rows[i]
        qsort(<void*> &res[0], L, sizeof(int), _cmp_int)
        out.append(res)
        return
    buf = <Keyed*> malloc(L * sizeof(Keyed))
    sub = <int*> malloc(L * sizeof(int))
    try:
        for i in range(L):
            buf[i].v = A[rows[i], c] - A[rows[i], cols[k]]
            buf[i].idx = rows[i]
        qsort(<void*> buf, L, sizeof(Keyed), _cmp_keyed)
        r = 0
        prev_r = -1
        for l in range(L):
            if r < l:
                r = l
            while r + 1 < L and buf[r + 1].v - buf[l].v <= eps:
                r += 1
            if r > prev_r:
                prev_r = r
                w = r - l + 1
                if w >= min_rows:
                    for i in range(w):
                        sub[i] = buf[l + i].idx
                    _windows(A, sub, w, cols, ncols, k + 1, c, eps, min_rows, out)
            if r == L - 1:
                break
    finally:
        free(buf)
        free(sub)


def extend_rows(const double[:, ::1] A, rows, cols, int c, double eps, int min_rows):
    """Candidate row sets of ``rows`` that stay coherent after adding column ``c``.

    ``rows`` must already be coherent on ``cols``. Every maximal coherent
    subset is returned; non-maximal or repeated sets may also appear.
    """
    cdef cnp.ndarray[cnp.int32_t, ndim=1] r = np.ascontiguousarray(rows, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cc = np.ascontiguousarray(cols, dtype=np.int32)
    cdef list out = []
    cdef int* work
    cdef int L = r.shape[0]
    cdef int i
    if L < min_rows or L == 0:
        return out
    work = <int*> malloc(L * sizeof(int))
    try:
        for i in range(L):
            work[i] = r[i]
        _windows(A, work, L, <const int*> &cc[0], cc.shape[0], 0, c, eps, min_rows, out)
    finally:
        free(work)
    return out


def fits_column(const double[:, ::1] A, rows, cols, int c, double eps):
    """True when adding column ``c`` to ``(rows, cols)`` keeps it coherent."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] r = np.ascontiguousarray(rows, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cc = np.ascontiguousarray(cols, dtype=np.int32)
    cdef int i, k, j
    cdef double d, lo, hi
    for k in range(cc.shape[0]):
        j = cc[k]
        lo = A[r[0], c] - A[r[0], j]
        hi = lo
        for i in range(1, r.shape[0]):
            d = A[r[i], c] - A[r[i], j]
            if d < lo:
                lo = d
            elif d > hi:
                hi = d
        if hi - lo > eps:
            return False
    return True


cdef inline bint _better(long d1, long a1, long b1, long d2, long a2, long b2) nogil:
    # (distance, min id, max id) lexicographic comparison
    if d1 != d2:
        return d1 < d2
    if a1 != a2:
        return a1 < a2
    return b1 < b2


def single_linkage_merges(cnp.ndarray D_in):
    """Single-linkage merge list for an integer distance matrix.

    Returns an ``(q - 1, 3)`` int64 array of ``(id_a, id_b, height)`` with
    ``id_a < id_b``. Leaves are ``0..q-1``; merge ``t`` creates id ``q + t``.
    Ties go to the smallest ``(min id, max id)`` pair.
    """
    cdef cnp.ndarray[cnp.int64_t, ndim=2] D = np.array(D_in, dtype=np.int64, order="C", copy=True)
    cdef Py_ssize_t q = D.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] merges = np.zeros((max(q - 1, 0), 3), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ids = np.arange(q, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] active = np.ones(q, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nn = np.full(q, -1, dtype=np.int64)
    cdef Py_ssize_t i, j, a, b, t, best
    cdef long lo, hi, blo, bhi, da, newid
    if q < 2:
        return merges

    for i in range(q):
        _refresh(D, ids, active, nn, i, q)

    for t in range(q - 1):
        best = -1
        for i in range(q):
            if not active[i] or nn[i] < 0:
                continue
            j = nn[i]
            lo = min(ids[i], ids[j])
            hi = max(ids[i], ids[j])
            if best < 0 or _better(D[i, j], lo, hi, D[best, nn[best]], blo, bhi):
                best = i
                blo = lo
                bhi = hi
        a = best
        b = nn[best]
        merges[t, 0] = blo
        merges[t, 1] = bhi
        merges[t, 2] = D[a, b]
        if b < a:
            a, b = b, a
        newid = q + t
        active[b] = 0
        ids[a] = newid
        for j in range(q):
            if active[j] and j != a:
                da = min(D[a, j], D[b, j])
                D[a, j] = da
                D[j, a] = da
        nn[b] = -1
        _refresh(D, ids, active, nn, a, q)
        for i in range(q):
            if not active[i] or i == a:
                continue
            if nn[i] == a or nn[i] == b:
                _refresh(D, ids, active, nn, i, q)
            else:
                j = nn[i]
                if _better(D[i, a], min(ids[i], ids[a]), max(ids[i], ids[a]),
                           D[i, j], min(ids[i], ids[j]), max(ids[i], ids[j])):
                    nn[i] = a
    return merges


cdef void _refresh(cnp.int64_t[:, ::1] D, cnp.int64_t[::1] ids, cnp.uint8_t[::1] active,
                   cnp.int64_t[::1] nn, Py_ssize_t i, Py_ssize_t q):
    cdef Py_ssize_t j, bj = -1
    for j in range(q):
        if j == i or not active[j]:
            continue
        if bj < 0 or _better(D[i, j], min(ids[i], ids[j]), max(ids[i], ids[j]),
                             D[i, bj], min(ids[i], ids[bj]), max(ids[i], ids[bj])):
            bj = j
    nn[i] = bj
