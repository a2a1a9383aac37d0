"""Artificial benchmarks with planted coherent-values biclusters.

Three layouts are supported:

``art1``
    5 biclusters on pairwise disjoint rows (no overlap).
``art2``
    5 biclusters, each sharing a block of about 25% of the smaller area
    with its predecessor.
``art3``
    15 biclusters, each (after the first) sharing a block with a random
    earlier one, the shared fraction cycling through 0, 10%, 25% and 50%.

The background is i.i.d. uniform on ``1..100``. A planted bicluster holds
``base[i] + offset[j]``: the first column gets a fresh uniform ``1..100``
value per row, further columns add a constant from ``{-10..-1, 1..10}``.
When a bicluster overlaps an earlier one, it inherits the row bases and
column offsets of the shared block, so both stay exactly coherent. Shared
rows are always taken from rows owned by that single earlier bicluster,
which keeps each cell under at most two plants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Bicluster, DataMatrix, Solution

ROW_SIZES = range(50, 61)
COL_SIZES = range(4, 8)
OFFSETS = np.array([*range(-10, 0), *range(1, 11)])
ART2_SHARE = 0.25
ART3_SHARES = (0.0, 0.10, 0.25, 0.50)
DEFAULT_COUNTS = {"art1": 5, "art2": 5, "art3": 15}


class PlacementError(RuntimeError):
    """The requested layout does not fit in the matrix."""


@dataclass(frozen=True)
class SynthSpec:
    kind: str = "art1"
    n_rows: int = 1000
    n_cols: int = 15
    n_biclusters: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in DEFAULT_COUNTS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.n_biclusters is None:
            object.__setattr__(self, "n_biclusters", DEFAULT_COUNTS[self.kind])
        if self.n_rows < 1 or self.n_cols < 1 or self.n_biclusters < 1:
            raise ValueError("sizes must be positive")

    def as_text(self) -> str:
        return "".join(
            f"{k}={getattr(self, k)}\n"
            for k in ("kind", "n_rows", "n_cols", "n_biclusters", "seed")
        )


@dataclass(frozen=True)
class PlantedInstance:
    matrix: DataMatrix
    truth: Solution
    spec: SynthSpec = field(default_factory=SynthSpec)


@dataclass
class _Plant:
    rows: np.ndarray
    cols: np.ndarray
    base: dict
    offset: dict


def _shares(spec: SynthSpec) -> list[float | None]:
    # None: no predecessor, rows all fresh
    if spec.kind == "art1":
        return [None] * spec.n_biclusters
    if spec.kind == "art2":
        return [None] + [ART2_SHARE] * (spec.n_biclusters - 1)
    return [None] + [ART3_SHARES[k % len(ART3_SHARES)] for k in range(1, spec.n_biclusters)]


def _block(rng, share, nr, nc, target: _Plant, own_rows):
    """Pick (shared rows, shared cols) covering ~share of the smaller area."""
    t_area = len(target.rows) * len(target.cols)
    want = share * min(nr * nc, t_area)
    options = []
    for sc in range(1, min(nc, len(target.cols)) + 1):
        sr = int(round(want / sc))
        if 1 <= sr <= min(nr, len(own_rows)):
            options.append((sr, sc))
    if not options:
        raise PlacementError("cannot realise the requested overlap")
    sr, sc = options[rng.integers(len(options))]
    rows = rng.choice(own_rows, size=sr, replace=False)
    cols = rng.choice(target.cols, size=sc, replace=False)
    return np.sort(rows), np.sort(cols)


def generate(spec: SynthSpec) -> PlantedInstance:
    """Build the matrix and its planted ground truth, deterministically from ``spec.seed``."""
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n_rows, spec.n_cols
    A = rng.integers(1, 101, size=(n, m)).astype(np.float64)
    owner = np.full(n, -1)  # plant owning each row exclusively, -1 free, -2 shared
    plants: list[_Plant] = []

    for k, share in enumerate(_shares(spec)):
        nr = int(rng.choice(ROW_SIZES))
        nc = int(rng.choice(COL_SIZES))
        if nc > m:
            raise PlacementError(f"{nc} planted columns do not fit in {m}")
        shared_rows = np.empty(0, dtype=int)
        shared_cols = np.empty(0, dtype=int)
        target = None
        if share:
            candidates = [k - 1] if spec.kind == "art2" else rng.permutation(k).tolist()
            for t in candidates:
                try:
                    shared_rows, shared_cols = _block(
                        rng, share, nr, nc, plants[t], np.flatnonzero(owner == t)
                    )
                except PlacementError:
                    continue
                target = plants[t]
                break
            else:
                raise PlacementError(f"no earlier bicluster can share {share:.0%} with bicluster {k}")
        free = np.flatnonzero(owner == -1)
        n_fresh = nr - len(shared_rows)
        if n_fresh > len(free):
            raise PlacementError("not enough free rows for the planted biclusters")
        rows = np.sort(np.concatenate([shared_rows, rng.choice(free, size=n_fresh, replace=False)]))
        # a plant never touches the target's columns outside the shared block
        other_cols = np.setdiff1d(np.arange(m), target.cols if target else shared_cols)
        cols = np.sort(
            np.concatenate([shared_cols, rng.choice(other_cols, size=nc - len(shared_cols), replace=False)])
        )

        offset = {int(j): target.offset[int(j)] for j in shared_cols} if target else {}
        if offset:
            ref = offset[int(shared_cols[0])]
        else:
            ref = 0
            offset[int(cols[0])] = 0
        for j in cols:
            if int(j) not in offset:
                offset[int(j)] = ref + int(rng.choice(OFFSETS))
        base = {int(i): target.base[int(i)] for i in shared_rows} if target else {}
        for i in rows:
            if int(i) not in base:
                base[int(i)] = int(rng.integers(1, 101)) - offset[int(cols[0])]

        for i in rows:
            A[i, cols] = [base[int(i)] + offset[int(j)] for j in cols]
        owner[shared_rows] = -2
        owner[np.setdiff1d(rows, shared_rows)] = k
        plants.append(_Plant(rows, cols, base, offset))

    truth = Solution((Bicluster(p.rows.tolist(), p.cols.tolist()) for p in plants), (n, m))
    return PlantedInstance(DataMatrix(A), truth, spec)


def add_noise(m, sigma: float, seed) -> DataMatrix:
    """Add i.i.d. ``Normal(0, sigma)`` noise to every cell. ``sigma`` is a standard deviation."""
    values = m.values if isinstance(m, DataMatrix) else np.asarray(m, dtype=np.float64)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return m if isinstance(m, DataMatrix) else DataMatrix(values)
    rng = np.random.default_rng(seed)
    return DataMatrix(values + rng.normal(0.0, sigma, size=values.shape))
