"""Compiled and pure-Python kernels must agree exactly."""

import numpy as np
import pytest
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import squareform

from bicagg import _backend

needs_ext = pytest.mark.skipif("cython" not in _backend.available(), reason="compiled kernels not built")
PY = _backend.get("python")


def _as_sets(out):
    return sorted(tuple(int(x) for x in a) for a in out)


@needs_ext
def test_extend_rows_agree():
    C = _backend.get("cython")
    rng = np.random.default_rng(0)
    for _ in range(200):
        n, m = int(rng.integers(2, 30)), int(rng.integers(2, 6))
        A = rng.integers(0, 6, size=(n, m)).astype(float)
        rows = np.sort(rng.choice(n, int(rng.integers(1, n + 1)), replace=False)).astype(np.int32)
        cols = list(range(m - 1))
        eps = float(rng.choice([0, 0.5, 1, 2]))
        mr = int(rng.integers(1, 4))
        a = C.extend_rows(A, rows, cols, m - 1, eps, mr)
        b = PY.extend_rows(A, rows, cols, m - 1, eps, mr)
        assert _as_sets(a) == _as_sets(b)


def test_extend_rows_windows():
    A = np.array([[0.0, 0], [0, 1], [0, 2], [0, 5]])
    out = PY.extend_rows(A, np.arange(4, dtype=np.int32), [0], 1, 1.0, 1)
    assert _as_sets(out) == [(0, 1), (1, 2), (3,)]


@needs_ext
def test_fits_column_agree():
    C = _backend.get("cython")
    rng = np.random.default_rng(1)
    for _ in range(200):
        A = rng.integers(0, 4, size=(8, 4)).astype(float)
        rows = np.sort(rng.choice(8, 3, replace=False)).astype(np.int32)
        eps = float(rng.choice([0, 1, 2]))
        assert C.fits_column(A, rows, [0, 1], 3, eps) == PY.fits_column(A, rows, [0, 1], 3, eps)


def _random_distances(rng, q, hi):
    X = rng.integers(0, hi, size=(q, q))
    D = np.triu(X, 1)
    return (D + D.T).astype(np.int64)


@pytest.mark.parametrize("name", _backend.available())
def test_single_linkage_heights_match_scipy(name):
    K = _backend.get(name)
    rng = np.random.default_rng(2)
    for _ in range(50):
        q = int(rng.integers(2, 25))
        D = _random_distances(rng, q, 6)
        merges = np.asarray(K.single_linkage_merges(D))
        ref = linkage(squareform(D.astype(float)), method="single")[:, 2]
        np.testing.assert_array_equal(merges[:, 2], ref)


@needs_ext
def test_single_linkage_merges_agree_with_ties():
    C = _backend.get("cython")
    rng = np.random.default_rng(3)
    for _ in range(100):
        D = _random_distances(rng, int(rng.integers(1, 30)), 3)
        np.testing.assert_array_equal(
            np.asarray(C.single_linkage_merges(D)), np.asarray(PY.single_linkage_merges(D))
        )


@pytest.mark.parametrize("name", _backend.available())
def test_single_linkage_tie_break(name):
    K = _backend.get(name)
    D = np.ones((4, 4), dtype=np.int64) - np.eye(4, dtype=np.int64)
    merges = np.asarray(K.single_linkage_merges(D)).tolist()
    assert merges == [[0, 1, 1], [2, 3, 1], [4, 5, 1]]
