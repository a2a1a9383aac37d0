"""Pure Python/numpy versions of the compiled kernels in ``_ckernels.pyx``."""

import numpy as np


def _max_windows(v, eps, min_rows):
    """(start, stop) of every maximal window of sorted ``v`` with range <= eps."""
    L = len(v)
    out = []
    r = 0
    prev_r = -1
    for l in range(L):
        if r < l:
            r = l
        while r + 1 < L and v[r + 1] - v[l] <= eps:
            r += 1
        if r > prev_r:
            prev_r = r
            if r - l + 1 >= min_rows:
                out.append((l, r + 1))
        if r == L - 1:
            break
    return out


def extend_rows(A, rows, cols, c, eps, min_rows):
    rows = np.asarray(rows, dtype=np.int32)
    cols = [int(j) for j in cols]
    out = []

    def rec(sub, k):
        if len(sub) < min_rows:
            return
        if k == len(cols):
            out.append(np.sort(sub).astype(np.int32))
            return
        v = A[sub, c] - A[sub, cols[k]]
        order = np.lexsort((sub, v))
        vs = v[order].tolist()
        ss = sub[order]
        for lo, hi in _max_windows(vs, eps, min_rows):
            rec(ss[lo:hi], k + 1)

    if len(rows) >= min_rows and len(rows):
        rec(rows, 0)
    return out


def fits_column(A, rows, cols, c, eps):
    rows = np.asarray(rows, dtype=np.intp)
    for j in cols:
        d = A[rows, c] - A[rows, j]
        if d.max() - d.min() > eps:
            return False
    return True


def single_linkage_merges(D_in):
    D = np.array(D_in, dtype=np.int64)
    q = D.shape[0]
    merges = np.zeros((max(q - 1, 0), 3), dtype=np.int64)
    if q < 2:
        return merges
    big = np.iinfo(np.int64).max
    ids = np.arange(q, dtype=np.int64)
    active = np.ones(q, dtype=bool)
    np.fill_diagonal(D, big)
    for t in range(q - 1):
        act = np.flatnonzero(active)
        sub = D[np.ix_(act, act)]
        dmin = sub.min()
        ii, jj = np.nonzero(np.triu(sub == dmin, k=1))
        lo = np.minimum(ids[act[ii]], ids[act[jj]])
        hi = np.maximum(ids[act[ii]], ids[act[jj]])
        pick = np.lexsort((hi, lo))[0]
        a, b = act[ii[pick]], act[jj[pick]]
        if b < a:
            a, b = b, a
        merges[t] = (lo[pick], hi[pick], dmin)
        row = np.minimum(D[a], D[b])
        D[a] = row
        D[:, a] = row
        D[a, a] = big
        active[b] = False
        D[b, :] = big
        D[:, b] = big
        ids[a] = q + t
    return merges
