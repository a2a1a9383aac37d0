"""Removal of weakly supported rows and columns from an aggregated bicluster."""

from __future__ import annotations

import numpy as np

from .core import Bicluster


class EmptyResultError(ValueError):
    """Outlier removal would leave no rows or no columns."""


def participation_matrix(aggregate: Bicluster, fragments) -> np.ndarray:
    """Count, for each cell of ``aggregate``, the fragments that contain it.

    Rows follow ``aggregate.rows`` and columns ``aggregate.cols``.
    Fragments need not lie inside the aggregate; only their intersection
    with it counts.
    """
    fragments = list(fragments)
    if not fragments:
        raise ValueError("participation matrix needs at least one fragment")
    row_pos = {r: i for i, r in enumerate(aggregate.rows)}
    col_pos = {c: j for j, c in enumerate(aggregate.cols)}
    P = np.zeros((len(aggregate.rows), len(aggregate.cols)), dtype=np.int64)
    for f in fragments:
        ri = [row_pos[r] for r in f.rows if r in row_pos]
        ci = [col_pos[c] for c in f.cols if c in col_pos]
        if ri and ci:
            P[np.ix_(ri, ci)] += 1
    return P


def _flagged(P: np.ndarray, axis: int) -> np.ndarray:
    """Cells below mean minus one (population) standard deviation along ``axis``."""
    mu = P.mean(axis=axis, keepdims=True)
    sd = P.std(axis=axis, keepdims=True)
    return P < mu - sd


def remove_outliers(aggregate: Bicluster, P, reduce_rows_first: bool = False) -> Bicluster:
    """Drop rows, then columns, that are flagged in every cell.

    A cell is flagged for the row test when it is below its column's mean
    minus one standard deviation, and for the column test when it is below
    its row's mean minus one standard deviation. A row goes when all its
    cells fail the row test; a column goes when all its cells fail the
    column test, checked over every row of ``P``.

    With ``reduce_rows_first`` the column test only looks at the rows that
    survived the row test. That variant drops genuine columns whenever the
    surviving rows share a single participation profile.

    Raises :class:`EmptyResultError` if nothing would remain.
    """
    P = np.asarray(P, dtype=np.float64)
    if P.shape != (len(aggregate.rows), len(aggregate.cols)):
        raise ValueError(f"participation matrix shape {P.shape} does not match {aggregate!r}")
    keep_rows = ~_flagged(P, axis=0).all(axis=1)
    if not keep_rows.any():
        raise EmptyResultError("every row is an outlier")
    col_flags = _flagged(P, axis=1)
    if reduce_rows_first:
        col_flags = col_flags[keep_rows]
    keep_cols = ~col_flags.all(axis=0)
    if not keep_cols.any():
        raise EmptyResultError("every column is an outlier")
    rows = np.asarray(aggregate.rows)[keep_rows]
    cols = np.asarray(aggregate.cols)[keep_cols]
    return Bicluster(rows.tolist(), cols.tolist())


def clean(aggregate: Bicluster, fragments) -> Bicluster:
    """Outlier removal from the fragments; falls back to ``aggregate`` if it would empty it."""
    try:
        return remove_outliers(aggregate, participation_matrix(aggregate, fragments))
    except EmptyResultError:
        return aggregate
