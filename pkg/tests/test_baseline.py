import pytest

from bicagg.aggregate import aggreg
from bicagg.baseline import BaselineParams, delete_step, merge_step, microcluster_pipeline, uncovered_ratio
from bicagg.core import Bicluster, Solution, area, cells, coverage

from .conftest import random_solution


# --- independent cell-set oracles -----------------------------------------

def oracle_delete(bics, eta):
    bics = list(bics)
    while True:
        best = None
        for k, b in enumerate(bics):
            others = set().union(*(cells(o) for i, o in enumerate(bics) if i != k))
            r = len(cells(b) - others) / area(b)
            key = (r, area(b), k)
            if r < eta and (best is None or key < best):
                best = key
        if best is None:
            return bics
        del bics[best[2]]


def oracle_merge(bics, gamma):
    bics = list(bics)
    while True:
        best = None
        for i in range(len(bics)):
            for j in range(i + 1, len(bics)):
                u = aggreg(bics[i], bics[j])
                r = len(cells(u) - cells(bics[i]) - cells(bics[j])) / area(u)
                if r < gamma and (best is None or (r, i, j) < best):
                    best = (r, i, j)
        if best is None:
            return bics
        _, i, j = best
        bics[i] = aggreg(bics[i], bics[j])
        del bics[j]


def oracle_pipeline(bics, eta, gamma, order):
    if order == "md":
        return oracle_delete(oracle_merge(bics, gamma), eta)
    return oracle_merge(oracle_delete(bics, eta), gamma)


# --------------------------------------------------------------------------

def test_params_validation():
    with pytest.raises(ValueError):
        BaselineParams(eta=0)
    with pytest.raises(ValueError):
        BaselineParams(gamma=1.5)
    with pytest.raises(ValueError):
        BaselineParams(order="xx")


def test_uncovered_ratio_examples():
    b = Bicluster([0, 1], [0, 1])
    assert uncovered_ratio(b, []) == 1
    assert uncovered_ratio(b, [b]) == 0
    assert uncovered_ratio(b, [Bicluster([0], [0, 1])]) == 0.5


def test_delete_examples():
    b = Bicluster([0, 1], [2])
    assert list(delete_step(Solution([b, b], (3, 3)), 0.01)) == [b]
    disjoint = Solution([Bicluster([0], [0]), Bicluster([1], [1]), Bicluster([2], [2])], (3, 3))
    assert list(delete_step(disjoint, 1.0)) == list(disjoint)


def test_merge_examples():
    b = Bicluster([0, 1], [2])
    assert list(merge_step(Solution([b, b], (3, 3)), 0.01)) == [b]
    d = Solution([Bicluster([0], [0]), Bicluster([5], [5])], (6, 6))
    assert list(merge_step(d, 0.5)) == list(d)
    assert len(merge_step(d, 0.51)) == 1
    c = Solution([Bicluster([0, 1], [0, 1]), Bicluster([0, 1], [0, 1, 2])], (3, 3))
    assert list(merge_step(c, 0.001)) == [Bicluster([0, 1], [0, 1, 2])]


def test_near_zero_thresholds_are_noops(rng):
    s = Solution([Bicluster([0, 1], [0]), Bicluster([1, 2], [1])], (3, 3))
    assert list(microcluster_pipeline(s, BaselineParams(1e-9, 1e-9))) == list(s)


def test_duplicates_removed_before_merge_in_dm():
    b, c = Bicluster([0, 1], [0, 1]), Bicluster([5, 6], [5, 6])
    s = Solution([b, b, c], (8, 8))
    assert list(microcluster_pipeline(s, BaselineParams(0.15, 0.15, "dm"))) == [b, c]


def test_delete_matches_oracle(rng):
    for _ in range(40):
        s = random_solution(rng, 10, 12, 8)
        assert list(delete_step(s, 0.15)) == oracle_delete(s, 0.15)


def test_merge_matches_oracle(rng):
    for _ in range(40):
        s = random_solution(rng, 10, 12, 8)
        g = float(rng.choice([0.15, 0.3, 0.6]))
        assert list(merge_step(s, g)) == oracle_merge(s, g)


@pytest.mark.parametrize("order", ["md", "dm"])
def test_pipeline_matches_oracle(rng, order):
    for _ in range(30):
        s = random_solution(rng, 10, 12, 8)
        out = microcluster_pipeline(s, BaselineParams(0.15, 0.15, order))
        assert list(out) == oracle_pipeline(s, 0.15, 0.15, order)


def test_step_invariants(rng):
    for _ in range(30):
        s = random_solution(rng, 12, 10, 6)
        d = delete_step(s, 0.15)
        assert coverage(d) <= coverage(s)
        assert len(d) <= len(s)
        assert all(uncovered_ratio(b, [o for j, o in enumerate(d) if j != i]) >= 0.15
                   for i, b in enumerate(d))
        m = merge_step(s, 0.15)
        assert coverage(s) <= coverage(m)
        bl = list(m)
        for i in range(len(bl)):
            for j in range(i + 1, len(bl)):
                u = aggreg(bl[i], bl[j])
                assert len(cells(u) - cells(bl[i]) - cells(bl[j])) / area(u) >= 0.15
