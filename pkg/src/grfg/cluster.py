"""M-Clustering: agglomerative merging of feature groups under the
relevance-difference / redundancy distance, stopped by a distance threshold."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Task
from .info import InfoConfig, discretize, distance_from_mi, mi_matrix, mutual_information, target_labels


@dataclass(frozen=True)
class GroupPartition:
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = [i for g in self.groups for i in g]
        if any(len(g) == 0 for g in self.groups) or len(seen) != len(set(seen)):
            raise ValueError("groups must be nonempty and disjoint")

    def __len__(self):
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(g) for g in self.groups}


def singleton_distances(pair_mi: np.ndarray, rel: np.ndarray, epsilon: float) -> np.ndarray:
    """Distances between every pair of single-feature groups, upper triangle order."""
    m = len(rel)
    iu = np.triu_indices(m, k=1)
    num = np.abs(rel[:, None] - rel[None, :])
    return (num / (pair_mi + epsilon))[iu]


def median_threshold(pair_mi: np.ndarray, rel: np.ndarray, epsilon: float) -> float:
    d = singleton_distances(pair_mi, rel, epsilon)
    return float(np.median(d)) if d.size else 0.0


def cluster_from_mi(pair_mi: np.ndarray, rel: np.ndarray, epsilon: float,
                    stop_threshold: float | None = None) -> GroupPartition:
    """Agglomerate features given their pairwise MI matrix and target relevances.

    With ``stop_threshold=None`` the threshold is the median singleton distance.
    """
    m = len(rel)
    if m == 0:
        raise ValueError("cannot cluster an empty feature set")
    if stop_threshold is None:
        stop_threshold = median_threshold(pair_mi, rel, epsilon)
    groups: list[tuple[int, ...]] = [(i,) for i in range(m)]
    cache: dict[tuple[tuple[int, ...], tuple[int, ...]], float] = {}

    def dist(a, b):
        key = (a, b) if a < b else (b, a)
        if key not in cache:
            cache[key] = distance_from_mi(list(key[0]), list(key[1]), pair_mi, rel, epsilon)
        return cache[key]

    while len(groups) > 1:
        best, bi, bj = np.inf, -1, -1
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                d = dist(groups[i], groups[j])
                if d < best:
                    best, bi, bj = d, i, j
        if best > stop_threshold:
            break
        merged = tuple(sorted(groups[bi] + groups[bj]))
        groups[bi] = merged
        del groups[bj]
    return GroupPartition(tuple(groups))


def m_clustering(features, y, cfg: InfoConfig = InfoConfig(), stop_threshold: float | None = None,
                 task: Task | str = Task.REGRESSION) -> GroupPartition:
    if len(features) == 0:
        raise ValueError("cannot cluster an empty feature set")
    if stop_threshold is not None and not stop_threshold > 0:
        raise ValueError("stop_threshold must be > 0")
    labels = [discretize(f, cfg.n_bins) for f in features]
    yl = target_labels(y, cfg, task)
    rel = np.array([mutual_information(l, yl) for l in labels])
    return cluster_from_mi(mi_matrix(labels), rel, cfg.epsilon, stop_threshold)
