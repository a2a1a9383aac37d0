"""Aggregation of fragmented biclusters.

Two methods are provided:

* single linkage over a binary row/column encoding with Hamming distance,
  followed by a cut of the dendrogram and a union of each group;
* pairwise merging by overlap rate until no pair reaches a threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from ._bits import PackedSets
from .core import Bicluster, Solution, membership


def aggreg(b: Bicluster, c: Bicluster) -> Bicluster:
    """Union of rows and union of columns."""
    return Bicluster(set(b.rows) | set(c.rows), set(b.cols) | set(c.cols))


def encode_binary(b: Bicluster, n: int, m: int) -> np.ndarray:
    if not b.fits(n, m):
        raise ValueError(f"{b!r} does not fit ({n}, {m})")
    x = np.zeros(n + m, dtype=np.uint8)
    x[list(b.rows)] = 1
    x[[n + j for j in b.cols]] = 1
    return x


def hamming(u, v) -> int:
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return int(np.count_nonzero(u != v))


def hamming_matrix(s: Solution) -> np.ndarray:
    """Pairwise Hamming distances of the binary encodings, as int64."""
    R, C = membership(s)
    X = np.hstack([R, C]).astype(np.float32)
    sizes = X.sum(axis=1)
    D = sizes[:, None] + sizes[None, :] - 2 * (X @ X.T)
    return np.rint(D).astype(np.int64)


@dataclass(frozen=True)
class Dendrogram:
    """Merge history: merge ``t`` joins clusters ``a < b`` into cluster ``n_leaves + t``."""

    merges: tuple[tuple[int, int, int], ...]
    n_leaves: int

    @property
    def heights(self) -> list[int]:
        return [h for _, _, h in self.merges]


def single_linkage(s: Solution, backend: str | None = None) -> Dendrogram:
    """Agglomerate ``s`` by single linkage on Hamming distance.

    ``s`` should contain only maximal biclusters (see
    :func:`bicagg.core.remove_non_maximal`): a fragment nested in a larger
    bicluster can be far from it in Hamming distance. Ties break towards
    the lexicographically smallest ``(min id, max id)``.
    """
    if not len(s):
        raise ValueError("single linkage needs at least one bicluster")
    K = _backend.get(backend) if backend else _backend.kernels
    merges = K.single_linkage_merges(hamming_matrix(s))
    return Dendrogram(tuple((int(a), int(b), int(h)) for a, b, h in merges), len(s))


def cut(d: Dendrogram, k: int) -> list[list[int]]:
    """Leaf groups after the first ``n_leaves - k`` merges, ordered by smallest leaf."""
    q = d.n_leaves
    if not 1 <= k <= q:
        raise ValueError(f"k must be in [1, {q}], got {k}")
    parent = list(range(2 * q - 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, (a, b, _) in enumerate(d.merges[: q - k]):
        parent[find(a)] = q + t
        parent[find(b)] = q + t
    groups: dict[int, list[int]] = {}
    for leaf in range(q):
        groups.setdefault(find(leaf), []).append(leaf)
    return sorted(groups.values(), key=lambda g: g[0])


def aggregate_groups(s: Solution, groups) -> Solution:
    """One union bicluster per group, ordered by each group's smallest member."""
    flat = sorted(i for g in groups for i in g)
    if flat != list(range(len(s))):
        raise ValueError("groups must partition the solution indices")
    out = []
    for g in sorted(groups, key=min):
        rows: set[int] = set()
        cols: set[int] = set()
        for i in g:
            rows.update(s[i].rows)
            cols.update(s[i].cols)
        out.append(Bicluster(rows, cols))
    return s.replace(out)


def aggregate_single_linkage(s: Solution, k: int, backend: str | None = None):
    """Cut the single-linkage dendrogram at ``k`` groups and aggregate them.

    Returns ``(solution, groups)``; ``groups[i]`` lists the indices of ``s``
    merged into output bicluster ``i``.
    """
    groups = cut(single_linkage(s, backend), k)
    return aggregate_groups(s, groups), groups


def aggregate_by_overlap(s: Solution, th: float, return_members: bool = False):
    """Merge pairs whose overlap rate is at least ``th`` until none is left.

    Pairs are scanned in list order (lexicographic by position); the first
    qualifying pair ``(i, j)`` is replaced by its union at position ``i``
    and the scan restarts. The result can depend on the input order when
    a merge lowers the overlap rate with a third bicluster, which happens
    once the union is larger than that bicluster.

    With ``return_members`` the member lists (indices into ``s``) of each
    output bicluster are returned as well.
    """
    if not 0 < th <= 1:
        raise ValueError(f"th must be in (0, 1], got {th}")
    q = len(s)
    members = [[i] for i in range(q)]
    if q < 2:
        out = s.replace(s.biclusters)
        return (out, members) if return_members else out

    R, C = membership(s)
    areas = R.sum(1) * C.sum(1)
    idx = np.arange(q)
    # H[a, b] for a < b: the pair qualifies; cnt[a] counts qualifying partners of a
    H = np.zeros((q, q), dtype=bool)
    for lo in range(0, q, 1024):
        blk = slice(lo, lo + 1024)
        O = (R[blk] @ R.T) * (C[blk] @ C.T) / np.minimum(areas[blk, None], areas[None, :])
        H[blk] = (O >= th) & (idx[None, :] > idx[blk, None])
    cnt = H.sum(1)
    active = np.ones(q, dtype=bool)
    rows, cols = PackedSets(R), PackedSets(C)

    while True:
        pending = np.flatnonzero(cnt)
        if not len(pending):
            break
        i = int(pending[0])
        j = int(np.argmax(H[i]))
        R[i] = np.maximum(R[i], R[j])
        C[i] = np.maximum(C[i], C[j])
        rows.union_into(i, j)
        cols.union_into(i, j)
        areas[i] = rows.size(i) * cols.size(i)
        active[j] = False
        cnt -= H[:, j]
        H[:, j] = False
        H[j] = False
        cnt[j] = 0
        shared = rows.shared_with(i) * cols.shared_with(i)
        hit = (shared / np.minimum(areas, areas[i]) >= th) & active
        col = hit & (idx < i)
        cnt += col.astype(cnt.dtype) - H[:, i]
        H[:, i] = col
        H[i] = hit & (idx > i)
        cnt[i] = H[i].sum()
        members[i].extend(members[j])
        members[j] = []

    keep = np.flatnonzero(active)
    out = s.replace(Bicluster(np.flatnonzero(R[i]), np.flatnonzero(C[i])) for i in keep)
    if return_members:
        return out, [sorted(members[i]) for i in keep]
    return out
