"""External evaluation of biclustering solutions.

Pairwise metrics treat matrix cells as the elements: a pair of distinct
cells is "retrieved" by a solution when some bicluster holds both. Pair
counts are computed by grouping cells with the same membership signature
(which biclusters hold them), so the pairs are never materialised.

Undefined values (an empty found solution, or a side with no cell pairs)
are ``None``, never 0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import Bicluster, Solution, area, cells, count_matrix, coverage_mask, membership

CSV_FIELDS = ("precision", "recall", "f_score", "ce", "diff_cov", "found_count", "reference_count")

_BLOCK = 512


def _check_dims(a: Solution, b: Solution) -> None:
    if a.dims != b.dims:
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")


def ov(b: Bicluster, c: Bicluster) -> float:
    """Shared cells over the area of the smaller bicluster."""
    shared_r = len(set(b.rows) & set(c.rows))
    shared_c = len(set(b.cols) & set(c.cols))
    return shared_r * shared_c / min(area(b), area(c))


def ov_matrix(s: Solution) -> np.ndarray:
    R, C = membership(s)
    inter = (R @ R.T) * (C @ C.T)
    a = R.sum(1) * C.sum(1)
    return inter / np.minimum(a[:, None], a[None, :])


def pair_set(s: Solution) -> set[tuple[tuple[int, int], tuple[int, int]]]:
    """Every unordered pair of distinct cells sharing a bicluster, as sorted tuples.

    Quadratic in bicluster area; meant for small inputs and as a reference.
    """
    out = set()
    for b in s:
        out.update(combinations(sorted(cells(b)), 2))
    return out


def _cell_signatures(s: Solution) -> np.ndarray:
    n, m = s.dims
    sig = np.zeros((n, m, len(s)), dtype=bool)
    for k, b in enumerate(s):
        sig[np.ix_(b.rows, b.cols, [k])] = True
    return sig.reshape(n * m, len(s))


def _linked_pairs(groups: list[np.ndarray], counts: np.ndarray) -> int:
    """Pairs of cells whose signature groups intersect in every component.

    ``groups[t]`` is a ``(K, q_t)`` incidence matrix over the same K cell
    groups; two groups are linked when their rows overlap in all of them.
    """
    K = len(counts)
    total = int((counts * (counts - 1) // 2).sum())
    counts_f = counts.astype(np.float64)
    mats = [g.astype(np.float32) for g in groups]
    cross = 0.0
    for lo in range(0, K, _BLOCK):
        hi = min(K, lo + _BLOCK)
        linked = np.ones((hi - lo, K), dtype=bool)
        for g in mats:
            linked &= (g[lo:hi] @ g.T) > 0
        # upper triangle only, excluding the diagonal
        idx = np.arange(lo, hi)
        linked &= idx[:, None] < np.arange(K)[None, :]
        cross += counts_f[lo:hi] @ (linked @ counts_f)
    return total + int(round(cross))


def _pair_counts(found: Solution, ref: Solution) -> tuple[int, int, int]:
    """(|pairs(found)|, |pairs(ref)|, |pairs(found) & pairs(ref)|)."""
    _check_dims(found, ref)
    sf = _cell_signatures(found)
    sr = _cell_signatures(ref)
    in_f = sf.any(axis=1)
    in_r = sr.any(axis=1)

    def count(mask, parts):
        if not mask.any():
            return 0
        joint = np.concatenate([p[mask] for p in parts], axis=1)
        keys, cnt = np.unique(np.packbits(joint, axis=1), axis=0, return_counts=True)
        bits = np.unpackbits(keys, axis=1, count=joint.shape[1]).astype(bool)
        split = np.cumsum([p.shape[1] for p in parts])[:-1]
        return _linked_pairs(np.split(bits, split, axis=1), cnt)

    return count(in_f, [sf]), count(in_r, [sr]), count(in_f & in_r, [sf, sr])


def _precision_recall(found: Solution, ref: Solution):
    pf, pr, both = _pair_counts(found, ref)
    p = both / pf if pf else None
    # an empty found solution leaves recall undefined as well
    r = both / pr if pr and len(found) else None
    return p, r


def precision(found: Solution, ref: Solution) -> float | None:
    return _precision_recall(found, ref)[0]


def recall(found: Solution, ref: Solution) -> float | None:
    return _precision_recall(found, ref)[1]


def _f(p, r):
    if p is None or r is None:
        return None
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def f_score(found: Solution, ref: Solution) -> float | None:
    return _f(*_precision_recall(found, ref))


def ce(found: Solution, ref: Solution) -> float | None:
    """Clustering error score: matched cell overlap over the generalised union.

    The best one-to-one matching of found to reference biclusters
    maximises the summed cell intersections; the union counts each cell
    ``max(#found covering it, #reference covering it)`` times. 1 is a
    perfect match; duplicates and extra biclusters inflate the union.
    """
    _check_dims(found, ref)
    if not len(found) or not len(ref):
        return None
    Rf, Cf = membership(found)
    Rr, Cr = membership(ref)
    inter = (Rf @ Rr.T) * (Cf @ Cr.T)
    i, j = linear_sum_assignment(inter, maximize=True)
    d_max = inter[i, j].sum()
    union = np.maximum(count_matrix(found), count_matrix(ref)).sum()
    return float(d_max / union)


def diff_cov(found: Solution, ref: Solution) -> float:
    _check_dims(found, ref)
    a = coverage_mask(found)
    b = coverage_mask(ref)
    n, m = found.dims
    return float(np.count_nonzero(a ^ b) / (n * m))


@dataclass(frozen=True)
class MetricReport:
    precision: float | None
    recall: float | None
    f_score: float | None
    ce: float | None
    diff_cov: float
    found_count: int
    reference_count: int

    def csv_row(self) -> list[str]:
        return [_fmt(v) for v in asdict(self).values()]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def evaluate(found: Solution, ref: Solution) -> MetricReport:
    p, r = _precision_recall(found, ref)
    return MetricReport(
        precision=p,
        recall=r,
        f_score=_f(p, r),
        ce=ce(found, ref),
        diff_cov=diff_cov(found, ref),
        found_count=len(found),
        reference_count=len(ref),
    )
