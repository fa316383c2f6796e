"""Fixed-size descriptors for feature sets, groups and operations."""

from __future__ import annotations

import numpy as np

from .expr import CLAMP, OPERATIONS, Operation

N_STATS = 7
SET_DIM = N_STATS * N_STATS
OP_DIM = len(OPERATIONS)


def _describe(values: np.ndarray) -> np.ndarray:
    """count, std, min, max, Q1, median, Q3 of each row of ``values``.

    Rows are sorted first so the result does not depend on element order, and
    copied to C order so reductions sum in the same order for any input layout.
    """
    v = np.ascontiguousarray(np.sort(values, axis=1))
    q1, med, q3 = np.quantile(v, [0.25, 0.5, 0.75], axis=1)
    return np.stack([
        np.full(v.shape[0], float(v.shape[1])),
        v.std(axis=1),
        v[:, 0],
        v[:, -1],
        q1, med, q3,
    ], axis=1)


def rep_feature_set(features) -> np.ndarray:
    """49-dim state: column-wise statistics, then row-wise statistics of those, flattened."""
    if len(features) == 0:
        raise ValueError("cannot represent an empty feature set")
    lengths = {len(f) for f in features}
    if len(lengths) != 1:
        raise ValueError("features have ragged lengths")
    cols = np.asarray(features, dtype=float)  # (m, n)
    with np.errstate(all="ignore"):
        stage1 = _describe(cols).T  # (7, m)
        stage1 = np.clip(np.nan_to_num(stage1, nan=0.0, posinf=CLAMP, neginf=-CLAMP), -CLAMP, CLAMP)
        stage2 = _describe(stage1)  # (7, 7)
    out = np.nan_to_num(stage2.ravel(), nan=0.0, posinf=CLAMP, neginf=-CLAMP)
    return np.clip(out, -CLAMP, CLAMP)


def rep_operation(op: Operation) -> np.ndarray:
    out = np.zeros(OP_DIM)
    out[op.index] = 1.0
    return out
