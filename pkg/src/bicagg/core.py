"""Matrices, biclusters and solutions, plus their file formats.

All indices are 0-based, both in memory and on disk.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np


class FormatError(ValueError):
    """Raised when a dataset or solution file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class DataMatrix:
    """Dense, finite, real-valued matrix under analysis."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def _canon(indices: Iterable[int], what: str) -> tuple[int, ...]:
    out = tuple(sorted({int(i) for i in indices}))
    if not out:
        raise ValueError(f"bicluster {what} must be non-empty")
    if out[0] < 0:
        raise ValueError(f"negative {what[:-1]} index {out[0]}")
    return out


@dataclass(frozen=True, order=True)
class Bicluster:
    """A submatrix named by its row and column index sets.

    Indices are stored sorted and duplicate-free, so two biclusters naming
    the same cells compare equal. Ordering is lexicographic on
    ``(rows, cols)``, which is the canonical order used for output.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", _canon(self.rows, "rows"))
        object.__setattr__(self, "cols", _canon(self.cols, "cols"))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def fits(self, n_rows: int, n_cols: int) -> bool:
        return self.rows[-1] < n_rows and self.cols[-1] < n_cols

    def issubset(self, other: "Bicluster") -> bool:
        return set(self.rows) <= set(other.rows) and set(self.cols) <= set(other.cols)

    def __repr__(self):
        return f"Bicluster(rows={list(self.rows)}, cols={list(self.cols)})"


@dataclass(frozen=True)
class Solution:
    """An ordered collection of biclusters over an ``n_rows x n_cols`` matrix.

    Duplicates and nested biclusters are allowed. Every algorithm in this
    package documents whether its result depends on the input order.
    """

    biclusters: tuple[Bicluster, ...]
    dims: tuple[int, int]

    def __init__(self, biclusters: Iterable[Bicluster], dims: Sequence[int]):
        bics = tuple(biclusters)
        n, m = int(dims[0]), int(dims[1])
        if n < 1 or m < 1:
            raise ValueError(f"invalid dims {dims!r}")
        for b in bics:
            if not isinstance(b, Bicluster):
                raise TypeError(f"expected Bicluster, got {type(b).__name__}")
            if not b.fits(n, m):
                raise ValueError(f"{b!r} does not fit dims ({n}, {m})")
        object.__setattr__(self, "biclusters", bics)
        object.__setattr__(self, "dims", (n, m))

    def __len__(self) -> int:
        return len(self.biclusters)

    def __iter__(self) -> Iterator[Bicluster]:
        return iter(self.biclusters)

    def __getitem__(self, i):
        return self.biclusters[i]

    def replace(self, biclusters: Iterable[Bicluster]) -> "Solution":
        return Solution(biclusters, self.dims)

    def sorted(self) -> "Solution":
        return Solution(sorted(self.biclusters), self.dims)

    def as_set(self) -> frozenset[Bicluster]:
        return frozenset(self.biclusters)


def area(b: Bicluster) -> int:
    return len(b.rows) * len(b.cols)


def cells(b: Bicluster) -> set[tuple[int, int]]:
    return {(i, j) for i in b.rows for j in b.cols}


def coverage(s: Solution) -> set[tuple[int, int]]:
    out: set[tuple[int, int]] = set()
    for b in s:
        out.update(cells(b))
    return out


def coverage_mask(s: Solution) -> np.ndarray:
    """Boolean ``dims``-shaped mask of the cells covered by ``s``."""
    mask = np.zeros(s.dims, dtype=bool)
    for b in s:
        mask[np.ix_(b.rows, b.cols)] = True
    return mask


def count_matrix(s: Solution) -> np.ndarray:
    """Per-cell number of biclusters of ``s`` covering that cell."""
    counts = np.zeros(s.dims, dtype=np.int64)
    for b in s:
        counts[np.ix_(b.rows, b.cols)] += 1
    return counts


def membership(s: Solution) -> tuple[np.ndarray, np.ndarray]:
    """Row and column incidence matrices, shapes ``(q, n)`` and ``(q, m)``."""
    n, m = s.dims
    R = np.zeros((len(s), n), dtype=np.float64)
    C = np.zeros((len(s), m), dtype=np.float64)
    for k, b in enumerate(s):
        R[k, list(b.rows)] = 1.0
        C[k, list(b.cols)] = 1.0
    return R, C


def remove_non_maximal(s: Solution) -> Solution:
    """Drop every bicluster contained in another one; collapse duplicates.

    Survivors keep their input order (first copy of a duplicate wins).
    """
    unique: list[Bicluster] = []
    seen: set[Bicluster] = set()
    for b in s:
        if b not in seen:
            seen.add(b)
            unique.append(b)
    if len(unique) < 2:
        return s.replace(unique)
    R, C = membership(s.replace(unique))
    rsize = R.sum(axis=1)
    csize = C.sum(axis=1)
    # contained[a, b]: rows(a) <= rows(b) and cols(a) <= cols(b)
    contained = (R @ R.T == rsize[:, None]) & (C @ C.T == csize[:, None])
    np.fill_diagonal(contained, False)
    keep = ~contained.any(axis=1)
    return s.replace(b for b, k in zip(unique, keep) if k)


# ---------------------------------------------------------------------------
# file formats


def serialize_solution(s: Solution) -> str:
    lines = [json.dumps({"n_rows": s.dims[0], "n_cols": s.dims[1]})]
    for b in s:
        lines.append(json.dumps({"rows": list(b.rows), "cols": list(b.cols)}))
    return "\n".join(lines) + "\n"


def _index_list(obj, key: str, bound: int, lineno: int) -> list[int]:
    vals = obj.get(key)
    if not isinstance(vals, list):
        raise FormatError(f'"{key}" must be a list of integers', lineno)
    if not vals:
        raise FormatError(f'"{key}" is empty', lineno)
    out = []
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, int):
            raise FormatError(f'"{key}" contains non-integer {v!r}', lineno)
        if not 0 <= v < bound:
            raise FormatError(f'"{key}" index {v} out of range [0, {bound})', lineno)
        out.append(v)
    return out


def parse_solution(text: str) -> Solution:
    """Parse the JSON Lines solution format.

    The first non-blank line is ``{"n_rows": N, "n_cols": M}``; every later
    line is ``{"rows": [...], "cols": [...]}``. Errors carry the 1-based
    line number.
    """
    header = None
    bics: list[Bicluster] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"malformed JSON ({exc.msg})", lineno) from None
        if not isinstance(obj, dict):
            raise FormatError("expected a JSON object", lineno)
        if header is None:
            n, m = obj.get("n_rows"), obj.get("n_cols")
            if not (isinstance(n, int) and isinstance(m, int)) or n < 1 or m < 1:
                raise FormatError("header must give positive n_rows and n_cols", lineno)
            header = (n, m)
            continue
        rows = _index_list(obj, "rows", header[0], lineno)
        cols = _index_list(obj, "cols", header[1], lineno)
        bics.append(Bicluster(rows, cols))
    if header is None:
        raise FormatError("missing header line", 1)
    return Solution(bics, header)


def read_solution(path) -> Solution:
    return parse_solution(Path(path).read_text(encoding="utf-8"))


def write_solution(path, s: Solution) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_solution(s))


def _sniff_delimiter(first_line: str) -> str | None:
    if "\t" in first_line:
        return "\t"
    if "," in first_line:
        return ","
    return None


def parse_dataset(text: str, header: bool = False, labels: bool = False) -> DataMatrix:
    """Parse a CSV/TSV table of numbers (comma, tab or whitespace separated).

    ``header`` skips the first line, ``labels`` drops the first field of
    every line. Non-numeric or non-finite entries are rejected.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if header:
        lines = lines[1:]
    if not lines:
        raise FormatError("dataset has no data rows")
    delim = _sniff_delimiter(lines[0])
    rows = []
    width = None
    offset = 2 if header else 1
    for k, line in enumerate(lines):
        fields = line.split(delim) if delim else line.split()
        if labels:
            fields = fields[1:]
        try:
            vals = [float(f) for f in fields]
        except ValueError:
            raise FormatError("non-numeric field", k + offset) from None
        if not all(np.isfinite(vals)):
            raise FormatError("non-finite value", k + offset)
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise FormatError(f"expected {width} fields, got {len(vals)}", k + offset)
        rows.append(vals)
    if not width:
        raise FormatError("dataset has no columns")
    return DataMatrix(np.array(rows))


def read_dataset(path, header: bool = False, labels: bool = False) -> DataMatrix:
    return parse_dataset(Path(path).read_text(encoding="utf-8"), header=header, labels=labels)


def write_dataset(path, m: DataMatrix) -> None:
    buf = io.StringIO()
    np.savetxt(buf, m.values, delimiter=",", fmt="%.17g")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(buf.getvalue())
