"""Deleting and merging post-processing steps in the style of MicroCluster.

Both steps are greedy: every iteration acts on the single best candidate
(smallest ratio) and recomputes. The original steps are stated without an
order, so this choice is ours.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._bits import PackedSets
from .core import Bicluster, Solution, area, cells, count_matrix, membership


@dataclass(frozen=True)
class BaselineParams:
    eta: float = 0.15
    gamma: float = 0.15
    order: str = "dm"

    def __post_init__(self):
        if not 0 < self.eta <= 1 or not 0 < self.gamma <= 1:
            raise ValueError("eta and gamma must be in (0, 1]")
        if self.order not in ("md", "dm"):
            raise ValueError(f"order must be 'md' or 'dm', got {self.order!r}")


def uncovered_ratio(b: Bicluster, others) -> float:
    """Fraction of ``b``'s cells not covered by any bicluster in ``others``."""
    covered: set = set()
    for o in others:
        covered.update(cells(o))
    own = cells(b)
    return len(own - covered) / len(own)


def delete_step(s: Solution, eta: float) -> Solution:
    """Repeatedly remove the member whose uncovered ratio is smallest and below ``eta``.

    Ties go to the smaller area, then to the earlier member.
    """
    bics = list(s)
    if not bics:
        return s
    counts = count_matrix(s)
    areas = np.array([area(b) for b in bics])
    alive = np.ones(len(bics), dtype=bool)

    unc = np.array([np.count_nonzero(counts[np.ix_(b.rows, b.cols)] == 1) for b in bics])
    R, C = membership(s)
    R = R.astype(bool)
    C = C.astype(bool)
    while True:
        ratio = unc / areas
        cand = np.flatnonzero(alive & (ratio < eta))
        if not len(cand):
            break
        victim = min(cand, key=lambda k: (ratio[k], areas[k], k))
        alive[victim] = False
        b = bics[victim]
        block = np.ix_(b.rows, b.cols)
        counts[block] -= 1
        # a cell left with one cover is now uncovered for that single owner
        r, c = np.nonzero(counts[block] == 1)
        if len(r):
            rows = np.asarray(b.rows)[r]
            cols = np.asarray(b.cols)[c]
            owner = np.argmax(R[:, rows] & C[:, cols] & alive[:, None], axis=0)
            np.add.at(unc, owner, 1)
    return s.replace(b for b, a in zip(bics, alive) if a)


def _merge_ratios(R, C):
    """Uncovered fraction of the union of every pair, as a ``(q, q)`` array."""
    rs = R.sum(1)
    cs = C.sum(1)
    rr = R @ R.T
    cc = C @ C.T
    ur = rs[:, None] + rs[None, :] - rr
    uc = cs[:, None] + cs[None, :] - cc
    union_area = ur * uc
    a = rs * cs
    covered = a[:, None] + a[None, :] - rr * cc
    return (union_area - covered) / union_area


def merge_step(s: Solution, gamma: float) -> Solution:
    """Repeatedly replace the pair with the smallest merge ratio below ``gamma`` by its union.

    The merge ratio of ``(B, C)`` is the fraction of the union's area that
    neither ``B`` nor ``C`` covers. Ties go to the first pair in position
    order; the union takes the first member's position.
    """
    q = len(s)
    if q < 2:
        return s
    R, C = membership(s)
    M = _merge_ratios(R, C)
    M[np.tril_indices(q)] = np.inf  # only pairs a < b are candidates
    idx = np.arange(q)
    active = np.ones(q, dtype=bool)
    # cached per-row minimum, so each iteration scans q values, not q * q
    best = M.argmin(1)
    low = M[idx, best]
    rs = R.sum(1)
    cs = C.sum(1)
    rbits, cbits = PackedSets(R), PackedSets(C)
    while True:
        i = int(np.argmin(low))
        if not low[i] < gamma:
            break
        j = int(best[i])
        R[i] = np.maximum(R[i], R[j])
        C[i] = np.maximum(C[i], C[j])
        active[j] = False
        rbits.union_into(i, j)
        cbits.union_into(i, j)
        rs[i] = rbits.size(i)
        cs[i] = cbits.size(i)
        rr = rbits.shared_with(i)
        cc = cbits.shared_with(i)
        union_area = (rs + rs[i] - rr) * (cs + cs[i] - cc)
        covered = rs * cs + rs[i] * cs[i] - rr * cc
        row = np.where(active, (union_area - covered) / union_area, np.inf)
        M[j] = np.inf
        M[:, j] = np.inf
        M[i] = np.where(idx > i, row, np.inf)
        M[:, i] = np.where(idx < i, row, np.inf)
        stale = (best == i) | (best == j)
        stale[i] = True
        stale[j] = False
        low[j] = np.inf
        rows = np.flatnonzero(stale)
        best[rows] = M[rows].argmin(1)
        low[rows] = M[rows, best[rows]]
        # other rows before i may now prefer the new union
        better = (M[:, i] < low) | ((M[:, i] == low) & (i < best))
        better &= ~stale
        best[better] = i
        low[better] = M[better, i]
    keep = np.flatnonzero(active)
    return s.replace(Bicluster(np.flatnonzero(R[k]), np.flatnonzero(C[k])) for k in keep)


def microcluster_pipeline(s: Solution, p: BaselineParams) -> Solution:
    if p.order == "md":
        return delete_step(merge_step(s, p.gamma), p.eta)
    return merge_step(delete_step(s, p.eta), p.gamma)
