"""Random-forest evaluator and the downstream scores (F1, 1-RAE)."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sklearn.ensemble import RandomForestClassifier, RandomForestRegressor

from .data import FoldSplit, Task


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 10
    max_depth: int = 10
    min_samples_split: int = 2
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if min(self.n_trees, self.max_depth, self.min_samples_split) < 1:
            raise ValueError("forest settings must be positive")


@dataclass
class Metrics:
    score: float
    fold_scores: list[float] = field(default_factory=list)


def train_forest(X, y, task: Task | str, cfg: ForestConfig = ForestConfig(), seed: int | None = None):
    """Fit ``n_trees`` CART trees on bootstrap samples, ceil(sqrt(m)) features tried per split."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 1:
        raise ValueError("need at least 2 samples and 1 feature")
    kwargs = dict(
        n_estimators=cfg.n_trees,
        max_depth=cfg.max_depth,
        min_samples_split=cfg.min_samples_split,
        max_features=min(X.shape[1], math.ceil(math.sqrt(X.shape[1]))),
        bootstrap=cfg.bootstrap,
        random_state=cfg.seed if seed is None else seed,
        n_jobs=1,
    )
    if Task(task) is Task.CLASSIFICATION:
        model = RandomForestClassifier(criterion="gini", **kwargs)
        return model.fit(X, y.astype(np.int64))
    return RandomForestRegressor(criterion="squared_error", **kwargs).fit(X, y.astype(float))


def f1_score(y_true, y_pred, labels=None) -> float:
    """F1 of class 1 for binary problems, macro-averaged F1 otherwise.

    A class with no predicted and no true members scores 0.
    """
    y_true = np.asarray(y_true).astype(np.int64)
    y_pred = np.asarray(y_pred).astype(np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError("length mismatch")
    if labels is None:
        labels = np.union1d(y_true, y_pred)
    labels = np.asarray(labels)

    def per_class(c):
        tp = np.sum((y_pred == c) & (y_true == c))
        fp = np.sum((y_pred == c) & (y_true != c))
        fn = np.sum((y_pred != c) & (y_true == c))
        denom = 2 * tp + fp + fn
        return 0.0 if denom == 0 else 2 * tp / denom

    if len(labels) <= 2 and set(labels.tolist()) <= {0, 1}:
        return float(per_class(1))
    return float(np.mean([per_class(c) for c in labels]))


def one_minus_rae(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape:
        raise ValueError("length mismatch")
    denom = np.abs(y_true - y_true.mean()).sum()
    if denom == 0:
        raise ValueError("1-RAE undefined for a constant target")
    return float(1 - np.abs(y_true - y_pred).sum() / denom)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GRFG_THREADS", "1")))
    except ValueError:
        return 1


def evaluate_cv(features, y, task: Task | str, cfg: ForestConfig = ForestConfig(), folds: FoldSplit = None,
                threads: int | None = None) -> Metrics:
    """Mean held-out score over ``folds``; fold ``i`` trains with seed ``cfg.seed + i``.

    ``features`` is a list of vectors, or of objects with a ``values`` attribute.
    """
    if folds is None:
        raise ValueError("folds are required")
    cols = [getattr(f, "values", f) for f in features]
    X = np.column_stack(cols).astype(float)
    y = np.asarray(y)
    task = Task(task)
    labels = np.unique(y).astype(np.int64) if task is Task.CLASSIFICATION else None
    if sum(len(te) for _, te in folds.folds) != len(y) or X.shape[0] != len(y):
        raise ValueError("folds do not match the data size")

    def run(i):
        train, test = folds.folds[i]
        model = train_forest(X[train], y[train], task, cfg, seed=cfg.seed + i)
        pred = model.predict(X[test])
        if task is Task.CLASSIFICATION:
            return f1_score(y[test], pred, labels)
        return one_minus_rae(y[test], pred)

    threads = _threads() if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            scores = list(pool.map(run, range(folds.n_folds)))
    else:
        scores = [run(i) for i in range(folds.n_folds)]
    return Metrics(float(np.mean(scores)), scores)
