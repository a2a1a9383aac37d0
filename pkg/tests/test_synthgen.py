import itertools

import numpy as np
import pytest

from bicagg.enumeration import is_coherent
from bicagg.metrics import ov
from bicagg.synthgen import SynthSpec, add_noise, generate


@pytest.mark.parametrize("kind", ["art1", "art2", "art3"])
def test_planted_shapes_and_coherence(kind):
    inst = generate(SynthSpec(kind, seed=5))
    assert inst.matrix.shape == (1000, 15)
    assert len(inst.truth) == {"art1": 5, "art2": 5, "art3": 15}[kind]
    A = inst.matrix.values
    assert ((A >= -1000) & (A <= 1000)).all()
    for b in inst.truth:
        assert 50 <= len(b.rows) <= 60
        assert 4 <= len(b.cols) <= 7
        assert is_coherent(A, b, 0)


def test_art1_disjoint():
    t = generate(SynthSpec("art1", seed=2)).truth
    for a, b in itertools.combinations(t, 2):
        assert ov(a, b) == 0


def test_art2_overlaps_predecessor():
    t = list(generate(SynthSpec("art2", seed=2)).truth)
    assert all(ov(t[k - 1], t[k]) > 0 for k in range(1, 5))


def test_art3_has_varied_overlap():
    t = generate(SynthSpec("art3", seed=3)).truth
    levels = {round(ov(a, b), 2) for a, b in itertools.combinations(t, 2)} - {0}
    assert len(levels) >= 2


def test_background_range():
    inst = generate(SynthSpec("art1", seed=1))
    A = inst.matrix.values
    mask = np.ones(A.shape, dtype=bool)
    for b in inst.truth:
        mask[np.ix_(b.rows, b.cols)] = False
    bg = A[mask]
    assert bg.min() >= 1 and bg.max() <= 100
    assert np.array_equal(bg, np.round(bg))


def test_deterministic():
    a = generate(SynthSpec("art3", seed=9))
    b = generate(SynthSpec("art3", seed=9))
    assert np.array_equal(a.matrix.values, b.matrix.values)
    assert a.truth == b.truth
    assert not np.array_equal(a.matrix.values, generate(SynthSpec("art3", seed=10)).matrix.values)


def test_noise_statistics():
    m = generate(SynthSpec("art1", seed=0)).matrix
    assert add_noise(m, 0, 1) is m
    noisy = add_noise(m, 0.8, 1)
    d = noisy.values - m.values
    assert abs(d.mean()) < 0.02
    assert abs(d.std() - 0.8) < 0.02
    np.testing.assert_array_equal(add_noise(m, 0.8, 1).values, noisy.values)
    with pytest.raises(ValueError):
        add_noise(m, -1, 0)


def test_spec_validation():
    with pytest.raises(ValueError):
        SynthSpec("art4")
    with pytest.raises(ValueError):
        SynthSpec("art1", n_rows=0)
