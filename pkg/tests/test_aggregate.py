import itertools

import pytest

from bicagg.aggregate import (
    aggreg, aggregate_by_overlap, aggregate_groups, aggregate_single_linkage, cut,
    encode_binary, hamming, hamming_matrix, single_linkage,
)
from bicagg.core import Bicluster, Solution, coverage, remove_non_maximal
from bicagg.metrics import ov

from .conftest import random_bicluster, random_solution

B1, B2, B3 = Bicluster([0], [0]), Bicluster([0], [0, 1]), Bicluster([5], [5])
THREE = Solution([B1, B2, B3], (10, 10))


def test_aggreg_examples(rng):
    b = Bicluster([1, 2], [3])
    assert aggreg(b, b) == b
    assert aggreg(Bicluster([0], [0]), Bicluster([1], [1])) == Bicluster([0, 1], [0, 1])
    for _ in range(100):
        x, y, z = (random_bicluster(rng, 10, 8) for _ in range(3))
        assert aggreg(aggreg(x, y), z) == aggreg(x, aggreg(y, z))


def test_encode_binary(rng):
    assert encode_binary(Bicluster([0, 2], [1]), 3, 2).tolist() == [1, 0, 1, 0, 1]
    assert encode_binary(Bicluster(range(3), range(2)), 3, 2).all()
    for _ in range(50):
        b = random_bicluster(rng, 12, 7)
        assert encode_binary(b, 12, 7).sum() == len(b.rows) + len(b.cols)
    with pytest.raises(ValueError):
        encode_binary(Bicluster([3], [0]), 3, 2)


def test_hamming(rng):
    u = encode_binary(Bicluster([0], [0]), 2, 1)
    v = encode_binary(Bicluster([1], [0]), 2, 1)
    assert hamming(u, u) == 0
    assert hamming(u, v) == hamming(v, u) == 2
    for _ in range(100):
        b, c = random_bicluster(rng, 10, 6), random_bicluster(rng, 10, 6)
        expected = len(set(b.rows) ^ set(c.rows)) + len(set(b.cols) ^ set(c.cols))
        assert hamming(encode_binary(b, 10, 6), encode_binary(c, 10, 6)) == expected
    with pytest.raises(ValueError):
        hamming([0, 1], [0, 1, 1])


def test_hamming_matrix_matches_pairwise(rng):
    s = random_solution(rng, 12, 15, 9)
    D = hamming_matrix(s)
    for i, j in itertools.product(range(12), repeat=2):
        assert D[i, j] == hamming(encode_binary(s[i], 15, 9), encode_binary(s[j], 15, 9))


def test_single_linkage_small_cases():
    with pytest.raises(ValueError):
        single_linkage(Solution([], (3, 3)))
    assert single_linkage(Solution([B1], (10, 10))).merges == ()
    d = single_linkage(Solution([B1, B3], (10, 10)))
    assert d.merges == ((0, 1, 4),)


def test_three_bicluster_trace(backend):
    d = single_linkage(THREE, backend)
    assert d.merges == ((0, 1, 1), (2, 3, 4))
    assert cut(d, 2) == [[0, 1], [2]]
    assert cut(d, 3) == [[0], [1], [2]]
    assert cut(d, 1) == [[0, 1, 2]]
    out, groups = aggregate_single_linkage(THREE, 2, backend)
    assert list(out) == [Bicluster([0], [0, 1]), Bicluster([5], [5])]
    assert groups == [[0, 1], [2]]


def test_cut_range():
    d = single_linkage(THREE)
    for k in (0, 4):
        with pytest.raises(ValueError):
            cut(d, k)


def test_aggregate_groups():
    assert list(aggregate_groups(THREE, [[0], [1], [2]])) == list(THREE)
    assert list(aggregate_groups(THREE, [[2, 0, 1]])) == [Bicluster([0, 5], [0, 1, 5])]
    with pytest.raises(ValueError):
        aggregate_groups(THREE, [[0, 1]])
    with pytest.raises(ValueError):
        aggregate_groups(THREE, [[0, 1], [1, 2]])


def test_single_linkage_properties(rng, backend):
    for _ in range(30):
        s = remove_non_maximal(random_solution(rng, 25, 20, 10))
        d = single_linkage(s, backend)
        h = d.heights
        assert h == sorted(h)
        out, _ = aggregate_single_linkage(s, len(s), backend)
        assert out.as_set() == s.as_set()
        for k in (1, max(1, len(s) // 2)):
            agg, groups = aggregate_single_linkage(s, k, backend)
            assert len(agg) == k == len(groups)
            assert coverage(s) <= coverage(agg)


def test_overlap_examples():
    s = Solution([Bicluster([0, 1], [0, 1]), Bicluster([1, 2], [1, 2]), Bicluster([9], [9])], (10, 10))
    assert ov(s[0], s[1]) == 0.25
    out = aggregate_by_overlap(s, 0.25)
    assert list(out) == [Bicluster([0, 1, 2], [0, 1, 2]), Bicluster([9], [9])]
    d = Bicluster([3], [4])
    assert list(aggregate_by_overlap(Solution([d, d], (10, 10)), 0.3)) == [d]
    assert list(aggregate_by_overlap(s, 1.0)) == list(s)


def test_overlap_threshold_range():
    for th in (0, 1.5):
        with pytest.raises(ValueError):
            aggregate_by_overlap(THREE, th)


def test_overlap_fixpoint_and_coverage(rng):
    for _ in range(50):
        s = random_solution(rng, 20, 15, 8)
        th = float(rng.choice([0.1, 0.3, 0.5, 0.8]))
        out, members = aggregate_by_overlap(s, th, return_members=True)
        for a, b in itertools.combinations(out, 2):
            assert ov(a, b) < th
        assert coverage(s) <= coverage(out)
        assert sorted(i for g in members for i in g) == list(range(len(s)))
        for b, g in zip(out, members):
            rows = set().union(*(s[i].rows for i in g))
            cols = set().union(*(s[i].cols for i in g))
            assert b == Bicluster(rows, cols)


def test_overlap_can_depend_on_input_order():
    # merging B with E or with C first leads to different fixpoints
    B = Bicluster([0, 1], [0, 1])
    E = Bicluster(range(10), [0])
    C = Bicluster([0], range(10))
    dims = (10, 10)
    first = aggregate_by_overlap(Solution([B, E, C], dims), 0.5).as_set()
    second = aggregate_by_overlap(Solution([B, C, E], dims), 0.5).as_set()
    assert first != second
