import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grfg.info import (InfoConfig, discretize, entropy, group_distance, group_relevance, mutual_information,
                       relevance, utility)
from oracles import mi_by_entropies

LN2 = math.log(2)
CFG = InfoConfig()


@pytest.mark.parametrize("v,bins,expected", [
    ([0, 1, 2, 3], 2, [0, 0, 1, 1]),
    ([5, 5, 5], 20, [0, 0, 0]),
    ([0, 10], 4, [0, 3]),
])
def test_discretize(v, bins, expected):
    np.testing.assert_array_equal(discretize(v, bins), expected)


def test_discretize_empty():
    with pytest.raises(ValueError):
        discretize([], 3)


def test_mi_examples():
    assert mutual_information([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(LN2, abs=1e-12)
    assert mutual_information([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-12)
    expected = mi_by_entropies([0, 0, 1, 1], [0, 0, 0, 1])
    assert expected == pytest.approx(0.215762, abs=1e-6)
    assert mutual_information([0, 0, 1, 1], [0, 0, 0, 1]) == pytest.approx(expected, abs=1e-12)


def test_mi_length_mismatch():
    with pytest.raises(ValueError):
        mutual_information([0, 1], [0])


labels = st.lists(st.integers(0, 4), min_size=1, max_size=40)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_mi_symmetry_and_bounds(data):
    a = data.draw(labels)
    b = data.draw(st.lists(st.integers(0, 4), min_size=len(a), max_size=len(a)))
    ab, ba = mutual_information(a, b), mutual_information(b, a)
    assert abs(ab - ba) <= 1e-12
    assert 0 <= ab <= min(entropy(a), entropy(b)) + 1e-12


def test_relevance_examples():
    y = np.array([0, 0, 1, 1])
    assert relevance(y.astype(float), y, CFG, "classification") == pytest.approx(LN2, abs=1e-12)
    assert relevance([0.0, 1, 0, 1], y, CFG, "classification") == pytest.approx(0.0, abs=1e-12)
    assert relevance([1.0, 2, 3, 4], y, InfoConfig(n_bins=2), "classification") == pytest.approx(LN2, abs=1e-12)


def test_relevance_regression_bins_target():
    y = np.linspace(0, 1, 40)
    assert relevance(y, y, CFG, "regression") == pytest.approx(entropy(discretize(y, 20)))


def test_utility_examples():
    f = np.array([0.0, 0, 1, 1])
    assert utility([f], f, CFG, "classification") == pytest.approx(0.0, abs=1e-12)
    assert utility([f, f], f, CFG, "classification") == pytest.approx(0.0, abs=1e-12)
    y = np.array([0, 1, 0, 1])
    assert utility([f], y, CFG, "classification") == pytest.approx(-LN2, abs=1e-12)
    with pytest.raises(ValueError):
        utility([], y)


def test_group_distance_examples():
    f = np.array([0.0, 0, 1, 1])
    g = np.array([0.0, 1, 0, 1])
    assert group_distance([f], [f], f, CFG, "classification") == 0.0
    d = group_distance([f], [g], f, InfoConfig(epsilon=1e-5), "classification")
    assert d == pytest.approx(LN2 / 1e-5, rel=1e-12)
    assert d == pytest.approx(69314.7, abs=0.1)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10_000), ni=st.integers(1, 4), nj=st.integers(1, 4))
def test_group_distance_symmetric_nonnegative(seed, ni, nj):
    rng = np.random.default_rng(seed)
    y = rng.standard_normal(30)
    Ci = list(rng.standard_normal((ni, 30)))
    Cj = list(rng.standard_normal((nj, 30)))
    d1 = group_distance(Ci, Cj, y)
    d2 = group_distance(Cj, Ci, y)
    assert d1 >= 0 and abs(d1 - d2) <= 1e-12


def test_group_relevance_examples():
    y = np.array([0, 1, 0, 1, 1, 0, 1, 0])
    copy = y.astype(float)
    indep1 = np.array([0.0, 0, 1, 1, 0, 0, 1, 1])
    indep2 = np.array([0.0, 0, 0, 0, 1, 1, 1, 1])
    assert group_relevance([copy], y, CFG, "classification") == pytest.approx(LN2, abs=1e-12)
    assert group_relevance([indep1, indep2], y, CFG, "classification") == pytest.approx(0.0, abs=1e-12)
    assert group_relevance([copy, indep1], y, CFG, "classification") == pytest.approx(LN2 / 2, abs=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        InfoConfig(n_bins=1)
    with pytest.raises(ValueError):
        InfoConfig(epsilon=0)
