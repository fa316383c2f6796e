"""Plug-in entropy and mutual information on binned columns, plus the
information-theoretic scores built on them (relevance, set utility, group
relevance and group-group distance). All quantities are in nats."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Task


@dataclass(frozen=True)
class InfoConfig:
    n_bins: int = 20
    epsilon: float = 1e-5

    def __post_init__(self):
        if self.n_bins < 2:
            raise ValueError("n_bins must be >= 2")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")


def discretize(v, n_bins: int) -> np.ndarray:
    """Equal-width bin labels over [min, max]; a constant vector maps to zeros."""
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        raise ValueError("cannot discretize an empty vector")
    lo, hi = v.min(), v.max()
    if not hi > lo:
        return np.zeros(v.shape, dtype=np.int64)
    scaled = (v - lo) / (hi - lo) * n_bins
    return np.clip(np.floor(scaled), 0, n_bins - 1).astype(np.int64)


def entropy(a) -> float:
    a = np.asarray(a)
    _, counts = np.unique(a, return_counts=True)
    p = counts / a.size
    return float(-(p * np.log(p)).sum())


def mutual_information(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("mutual information of empty vectors")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    ka, kb = ai.max() + 1, bi.max() + 1
    joint = np.bincount(ai * kb + bi, minlength=ka * kb).reshape(ka, kb).astype(float)
    n = float(a.size)
    pa = joint.sum(axis=1, keepdims=True)
    pb = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    terms = joint[nz] / n * np.log(joint[nz] * n / (pa @ pb)[nz])
    # summing in sorted order makes MI(a, b) == MI(b, a) exactly
    return max(float(np.sort(terms).sum()), 0.0)


def mi_matrix(labels: list[np.ndarray]) -> np.ndarray:
    """Symmetric matrix of pairwise MI between label vectors (diagonal = entropy)."""
    m = len(labels)
    out = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            out[i, j] = out[j, i] = mutual_information(labels[i], labels[j])
    return out


def target_labels(y, cfg: InfoConfig, task: Task | str) -> np.ndarray:
    if Task(task) is Task.CLASSIFICATION:
        return np.asarray(y).astype(np.int64)
    return discretize(y, cfg.n_bins)


def _labels(features, cfg: InfoConfig) -> list[np.ndarray]:
    return [discretize(f, cfg.n_bins) for f in features]


def relevance(f, y, cfg: InfoConfig = InfoConfig(), task: Task | str = Task.REGRESSION) -> float:
    return mutual_information(discretize(f, cfg.n_bins), target_labels(y, cfg, task))


def utility_from_mi(pair_mi: np.ndarray, rel: np.ndarray) -> float:
    """Set utility from a precomputed pairwise MI matrix and relevance vector.

    The redundancy term averages over all ordered pairs, diagonal included.
    """
    m = len(rel)
    if m == 0:
        raise ValueError("utility of an empty feature set")
    return float(-pair_mi.sum() / (m * m) + rel.sum() / m)


def utility(features, y, cfg: InfoConfig = InfoConfig(), task: Task | str = Task.REGRESSION) -> float:
    if len(features) == 0:
        raise ValueError("utility of an empty feature set")
    labels = _labels(features, cfg)
    yl = target_labels(y, cfg, task)
    rel = np.array([mutual_information(l, yl) for l in labels])
    return utility_from_mi(mi_matrix(labels), rel)


def distance_from_mi(gi, gj, pair_mi: np.ndarray, rel: np.ndarray, epsilon: float) -> float:
    """Group distance given index lists into a precomputed MI matrix / relevance vector."""
    gi = np.asarray(gi)
    gj = np.asarray(gj)
    num = np.abs(rel[gi][:, None] - rel[gj][None, :])
    den = pair_mi[np.ix_(gi, gj)] + epsilon
    return float(np.sort((num / den).ravel()).sum() / (len(gi) * len(gj)))


def group_distance(Ci, Cj, y, cfg: InfoConfig = InfoConfig(), task: Task | str = Task.REGRESSION) -> float:
    if len(Ci) == 0 or len(Cj) == 0:
        raise ValueError("groups must be nonempty")
    li, lj = _labels(Ci, cfg), _labels(Cj, cfg)
    yl = target_labels(y, cfg, task)
    ri = [mutual_information(a, yl) for a in li]
    rj = [mutual_information(b, yl) for b in lj]
    terms = [
        abs(r_a - r_b) / (mutual_information(a, b) + cfg.epsilon)
        for a, r_a in zip(li, ri)
        for b, r_b in zip(lj, rj)
    ]
    return float(np.sort(terms).sum() / (len(Ci) * len(Cj)))


def group_relevance(C, y, cfg: InfoConfig = InfoConfig(), task: Task | str = Task.REGRESSION) -> float:
    if len(C) == 0:
        raise ValueError("group must be nonempty")
    return float(np.mean([relevance(f, y, cfg, task) for f in C]))
