"""Enumeration of maximal coherent-values biclusters.

A bicluster ``(R, C)`` is epsilon-coherent when, for every pair of columns
``j, k`` in ``C``, the differences ``A[i, j] - A[i, k]`` over ``i in R``
span a range of at most ``epsilon``. The property is hereditary, so for a
fixed column set the coherent row sets are exactly the cliques of a row
compatibility graph, and each new column only removes edges.

:func:`enumerate_maximal` walks column sets in ascending order, keeping the
maximal row cliques of each one (at least ``min_rows`` long). Extending by
a column splits each clique into maximal sorted-difference windows, one
column pair at a time; maximal cliques of the extension are the maximal
elements of those windows. Results are reported once the column set cannot
be extended by any other column.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import Bicluster, DataMatrix, Solution, remove_non_maximal


@dataclass(frozen=True)
class EnumParams:
    min_rows: int = 1
    min_cols: int = 1
    epsilon: float = 0.0

    def __post_init__(self):
        if self.min_rows < 1 or self.min_cols < 1:
            raise ValueError("min_rows and min_cols must be >= 1")
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be >= 0")


ORACLE_MAX_ROWS = 16
ORACLE_MAX_COLS = 12


def _values(m) -> np.ndarray:
    if isinstance(m, DataMatrix):
        return m.values
    return DataMatrix(m).values


def is_coherent(m, b: Bicluster, epsilon: float) -> bool:
    """Column-pair difference-range test on the submatrix named by ``b``."""
    A = _values(m)
    sub = A[np.ix_(b.rows, b.cols)]
    for j, k in itertools.combinations(range(sub.shape[1]), 2):
        d = sub[:, j] - sub[:, k]
        if d.max() - d.min() > epsilon:
            return False
    return True


def _bits(rows: np.ndarray) -> int:
    total = 0
    for r in rows.tolist():
        total |= 1 << r
    return total


def _maximal_row_sets(cands: list[np.ndarray]) -> list[np.ndarray]:
    """Drop repeated row sets and those contained in another candidate."""
    if len(cands) < 2:
        return cands
    uniq: dict[int, np.ndarray] = {}
    for rows in cands:
        uniq.setdefault(_bits(rows), rows)
    if len(uniq) < 2:
        return list(uniq.values())
    items = sorted(uniq.items(), key=lambda kv: -len(kv[1]))
    kept: list[tuple[int, np.ndarray]] = []
    for bits, rows in items:
        if not any(bits & kb == bits for kb, _ in kept):
            kept.append((bits, rows))
    return [rows for _, rows in kept]


def enumerate_maximal(m, p: EnumParams, backend: str | None = None) -> Solution:
    """All maximal epsilon-coherent biclusters of at least ``min_rows x min_cols``.

    Output is sorted canonically, so it does not depend on the backend.
    """
    A = _values(m)
    n, ncols = A.shape
    K = _backend.get(backend) if backend else _backend.kernels
    eps = float(p.epsilon)
    found: list[Bicluster] = []
    if n < p.min_rows or ncols < p.min_cols:
        return Solution([], (n, ncols))

    def report(cols: list[int], rowsets: list[np.ndarray]) -> None:
        others = [c for c in range(ncols) if c not in cols]
        for rows in rowsets:
            if not any(K.fits_column(A, rows, cols, c, eps) for c in others):
                found.append(Bicluster(rows.tolist(), cols))

    def search(cols: list[int], rowsets: list[np.ndarray]) -> None:
        if len(cols) >= p.min_cols:
            report(cols, rowsets)
        for c in range(cols[-1] + 1, ncols):
            if len(cols) + 1 + (ncols - 1 - c) < p.min_cols:
                break
            cands: list[np.ndarray] = []
            for rows in rowsets:
                cands.extend(K.extend_rows(A, rows, cols, c, eps, p.min_rows))
            nxt = _maximal_row_sets(cands)
            if nxt:
                search(cols + [c], nxt)

    everything = np.arange(n, dtype=np.int32)
    for a in range(ncols - p.min_cols + 1):
        search([a], [everything])
    return Solution(sorted(found), (n, ncols))


def _row_subsets(n: int, k_min: int):
    for k in range(k_min, n + 1):
        yield from itertools.combinations(range(n), k)


def brute_force_enumerate(m, p: EnumParams) -> Solution:
    """Exhaustive oracle: test every row subset against every column subset.

    Limited to ``16 x 12`` matrices.
    """
    A = _values(m)
    n, ncols = A.shape
    if n > ORACLE_MAX_ROWS or ncols > ORACLE_MAX_COLS:
        raise ValueError(
            f"brute force limited to {ORACLE_MAX_ROWS}x{ORACLE_MAX_COLS}, got {n}x{ncols}"
        )
    eps = float(p.epsilon)
    hits = []
    for k in range(p.min_cols, ncols + 1):
        for cols in itertools.combinations(range(ncols), k):
            pairs = list(itertools.combinations(cols, 2))
            for rows in _row_subsets(n, p.min_rows):
                ok = True
                for j, l in pairs:
                    d = [A[i, j] - A[i, l] for i in rows]
                    if max(d) - min(d) > eps:
                        ok = False
                        break
                if ok:
                    hits.append(Bicluster(rows, cols))
    return remove_non_maximal(Solution(hits, (n, ncols))).sorted()
