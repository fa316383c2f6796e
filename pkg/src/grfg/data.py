"""Dataset ingestion, column-name hygiene and cross-validation splits."""

from __future__ import annotations

import csv
import math
import re
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from sklearn.model_selection import KFold, StratifiedKFold

RESERVED = re.compile(r"[()+\-*/,\s]")


class Task(str, Enum):
    CLASSIFICATION = "classification"
    REGRESSION = "regression"


class DataError(ValueError):
    """Raised for malformed input tables."""


@dataclass(frozen=True)
class DataTable:
    names: tuple[str, ...]
    X: np.ndarray  # (n_rows, n_features), float64
    y: np.ndarray
    task: Task
    original_arity: int = field(default=-1)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(self.names):
            raise DataError("column count does not match names")
        if X.shape[0] != y.shape[0] or X.shape[0] < 1:
            raise DataError("columns and target must have the same positive length")
        if len(set(self.names)) != len(self.names):
            raise DataError("column names must be unique")
        for name in self.names:
            if not name or RESERVED.search(name):
                raise DataError(f"column name {name!r} contains a reserved character")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError("all values must be finite")
        task = Task(self.task)
        if task is Task.CLASSIFICATION:
            if np.any(y != np.round(y)) or y.min() < 0:
                raise DataError("classification targets must be non-negative integers")
            if len(np.unique(y)) < 2:
                raise DataError("classification target needs at least two classes")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "task", task)
        if self.original_arity == -1:
            object.__setattr__(self, "original_arity", X.shape[1])

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.names.index(name)]

    @property
    def columns(self) -> dict[str, np.ndarray]:
        return {name: self.X[:, i] for i, name in enumerate(self.names)}


def sanitize_names(names: list[str]) -> list[str]:
    """Replace reserved characters with ``_`` and suffix collisions with ``_2``, ``_3``..."""
    out: list[str] = []
    seen: set[str] = set()
    for raw in names:
        base = RESERVED.sub("_", raw) or "_"
        name, k = base, 2
        while name in seen:
            name = f"{base}_{k}"
            k += 1
        seen.add(name)
        out.append(name)
    return out


def _parse_cell(text: str, row: int, col: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"non-numeric cell {text!r} at row {row}, column {col!r}") from None
    if not math.isfinite(value):
        raise DataError(f"non-finite cell {text!r} at row {row}, column {col!r}")
    return value


def load_csv(path, target_name: str, task: Task | str) -> DataTable:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if target_name not in header:
        raise DataError(f"target column {target_name!r} not found in header")
    if len(set(header)) != len(header):
        raise DataError("duplicate column names in header")
    t_idx = header.index(target_name)
    feat_idx = [i for i in range(len(header)) if i != t_idx]
    if len(feat_idx) < 2:
        raise DataError("need at least 2 feature columns")
    raw_names = [header[i] for i in feat_idx]
    names = sanitize_names(raw_names)

    body = [r for r in rows[1:] if r and any(c.strip() for c in r)]
    if not body:
        raise DataError("no data rows")
    data = np.empty((len(body), len(header)))
    for r, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise DataError(f"row {r} has {len(row)} cells, expected {len(header)}")
        for c, cell in enumerate(row):
            data[r - 1, c] = _parse_cell(cell.strip(), r, header[c])
    return DataTable(tuple(names), data[:, feat_idx], data[:, t_idx], Task(task))


def write_csv(table: DataTable, path, target_name: str = "target") -> None:
    """Write with 17 significant digits so reloading is bit-exact."""
    header = list(table.names) + [target_name]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row, t in zip(table.X, table.y):
            w.writerow([f"{v:.17g}" for v in row] + [f"{t:.17g}"])


@dataclass(frozen=True)
class FoldSplit:
    folds: tuple[tuple[np.ndarray, np.ndarray], ...]
    stratified: bool = True

    @property
    def n_folds(self) -> int:
        return len(self.folds)


def _strata(table: DataTable, n_folds: int) -> np.ndarray:
    y = table.y
    if table.task is Task.CLASSIFICATION:
        return y.astype(int)
    n_bins = max(1, min(5, table.n_rows // n_folds))
    edges = np.quantile(y, np.linspace(0, 1, n_bins + 1)[1:-1])
    return np.searchsorted(edges, y, side="right")


def stratified_kfold(table: DataTable, n_folds: int = 5, seed: int = 0) -> FoldSplit:
    if n_folds < 2:
        raise DataError("n_folds must be at least 2")
    if n_folds > table.n_rows:
        raise DataError(f"n_folds={n_folds} exceeds n_rows={table.n_rows}")
    strata = _strata(table, n_folds)
    _, counts = np.unique(strata, return_counts=True)
    dummy = np.zeros((table.n_rows, 1))
    if counts.min() >= n_folds:
        splitter = StratifiedKFold(n_folds, shuffle=True, random_state=seed)
        folds = tuple(splitter.split(dummy, strata))
        return FoldSplit(folds, stratified=True)
    warnings.warn("a stratum has fewer members than folds; using unstratified folds")
    splitter = KFold(n_folds, shuffle=True, random_state=seed)
    return FoldSplit(tuple(splitter.split(dummy)), stratified=False)
