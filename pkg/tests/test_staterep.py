import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grfg.expr import OPERATIONS, Operation
from grfg.staterep import rep_feature_set, rep_operation


def test_length_49(rng):
    assert rep_feature_set(list(rng.standard_normal((3, 11)))).shape == (49,)


def test_constant_column():
    n, c = 6, 2.5
    out = rep_feature_set([np.full(n, c)]).reshape(7, 7)
    # stage 1 column is [n, 0, c, c, c, c, c]; each stage-2 row describes one value v
    for v, row in zip([n, 0, c, c, c, c, c], out):
        np.testing.assert_array_equal(row, [1, 0, v, v, v, v, v])


def test_hand_computed_two_columns():
    a = np.array([1.0, 2, 3, 4])
    b = np.array([0.0, 0, 0, 8])
    out = rep_feature_set([a, b]).reshape(7, 7)
    # stage 1, by hand: count 4/4, std sqrt(1.25)/sqrt(12), min 1/0, max 4/8,
    # Q1 1.75/0, median 2.5/0, Q3 3.25/2
    stage1 = np.array([[4, 4], [np.sqrt(1.25), np.sqrt(12)], [1, 0], [4, 8], [1.75, 0], [2.5, 0], [3.25, 2]])
    for row, (u, w) in zip(out, stage1):
        lo, hi = min(u, w), max(u, w)
        np.testing.assert_allclose(row, [2, (hi - lo) / 2, lo, hi, lo + (hi - lo) / 4, (lo + hi) / 2,
                                         lo + 3 * (hi - lo) / 4], rtol=1e-12)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 100_000), m=st.integers(1, 8), n=st.integers(1, 30))
def test_permutation_invariance(seed, m, n):
    rng = np.random.default_rng(seed)
    cols = rng.standard_normal((m, n)) * rng.choice([1e-3, 1, 1e6], size=(m, 1))
    base = rep_feature_set(list(cols))
    shuffled = cols[rng.permutation(m)][:, rng.permutation(n)]
    assert rep_feature_set(list(shuffled)).tobytes() == base.tobytes()
    assert np.all(np.isfinite(base))


def test_errors():
    with pytest.raises(ValueError):
        rep_feature_set([])
    with pytest.raises(ValueError):
        rep_feature_set([np.ones(3), np.ones(4)])


def test_extreme_values_clamped():
    out = rep_feature_set([np.array([1e12, -1e12, 1e12])])
    assert np.all(np.isfinite(out)) and np.abs(out).max() <= 1e12


def test_rep_operation():
    assert rep_operation(Operation.SQUARE_ROOT)[0] == 1
    assert rep_operation(Operation.DIVIDE)[13] == 1
    for op in OPERATIONS:
        v = rep_operation(op)
        assert v.shape == (14,) and v.sum() == 1 and set(v) == {0.0, 1.0}


def test_invariant_to_memory_layout():
    X = np.random.default_rng(4).standard_normal((43, 28))
    fortran = np.asfortranarray(X)
    assert rep_feature_set(X).tobytes() == rep_feature_set(fortran).tobytes()
