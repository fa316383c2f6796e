"""Group-wise feature generation and K-best size control."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import Task
from .expr import Binary, FeatureExpr, Operation, Unary, apply_op, render_name
from .info import InfoConfig, group_relevance, relevance


class Scenario(str, Enum):
    BINARY_CROSS = "binary_cross"
    UNARY_RELEVANT = "unary_relevant"


@dataclass
class Feature:
    """A column of the working feature set together with its derivation."""
    expr: FeatureExpr
    values: np.ndarray

    @property
    def name(self) -> str:
        return render_name(self.expr)


@dataclass
class GenerationOutcome:
    new_columns: list[Feature]
    scenario: Scenario
    k_used: int
    chosen_group: int = 1  # unary scenario: which input group was transformed


def cosine_similarity(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def default_k(n1: int, n2: int) -> int:
    return max(1, math.ceil((n1 + n2) / 2))


def generate_binary(op: Operation, C1: list[Feature], C2: list[Feature], K: int | None = None) -> GenerationOutcome:
    """Cross the K most dissimilar (lowest cosine) pairs; the group-1 feature is the left operand."""
    if op.arity != 2:
        raise ValueError(f"{op.name} is not binary")
    if not C1 or not C2:
        raise ValueError("groups must be nonempty")
    K = default_k(len(C1), len(C2)) if K is None else K
    if K < 1:
        raise ValueError("K must be >= 1")
    pairs = [(cosine_similarity(f.values, g.values), i, j)
             for i, f in enumerate(C1) for j, g in enumerate(C2)]
    pairs.sort()
    chosen = pairs[:min(K, len(pairs))]
    out = [Feature(Binary(op, C1[i].expr, C2[j].expr), apply_op(op, C1[i].values, C2[j].values))
           for _, i, j in chosen]
    return GenerationOutcome(out, Scenario.BINARY_CROSS, len(chosen))


def generate_unary(op: Operation, C1: list[Feature], C2: list[Feature], y, cfg: InfoConfig = InfoConfig(),
                   task: Task | str = Task.REGRESSION) -> GenerationOutcome:
    """Transform every feature of whichever group is more relevant to the target (ties pick group 1)."""
    if op.arity != 1:
        raise ValueError(f"{op.name} is not unary")
    if not C1 or not C2:
        raise ValueError("groups must be nonempty")
    r1 = group_relevance([f.values for f in C1], y, cfg, task)
    r2 = group_relevance([f.values for f in C2], y, cfg, task)
    which, group = (1, C1) if r1 >= r2 else (2, C2)
    out = [Feature(Unary(op, f.expr), apply_op(op, f.values)) for f in group]
    return GenerationOutcome(out, Scenario.UNARY_RELEVANT, len(out), which)


def kbest_select(features: list[Feature], y, cfg: InfoConfig = InfoConfig(), task: Task | str = Task.REGRESSION,
                 k: int = 1, scores=None) -> list[Feature]:
    """Keep the k features with the highest target MI, in their original order.

    ``scores`` may carry precomputed relevances aligned with ``features``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= len(features):
        return list(features)
    if scores is None:
        scores = [relevance(f.values, y, cfg, task) for f in features]
    # stable sort on descending score keeps earlier features on ties
    order = sorted(range(len(features)), key=lambda i: -scores[i])
    keep = sorted(order[:k])
    return [features[i] for i in keep]


def is_constant(v: np.ndarray) -> bool:
    return bool(np.all(v == v[0]))


def postprocess(current: list[Feature], outcome: GenerationOutcome, d0: int, y, cfg: InfoConfig = InfoConfig(),
                task: Task | str = Task.REGRESSION, relevance_fn=None) -> list[Feature]:
    """Union with the new columns (minus duplicate names and constants), then cap at 2*d0 via K-best."""
    names = {f.name for f in current}
    merged = list(current)
    for f in outcome.new_columns:
        if f.name in names or is_constant(f.values):
            continue
        names.add(f.name)
        merged.append(f)
    cap = 2 * d0
    if len(merged) > cap:
        scores = None if relevance_fn is None else [relevance_fn(f) for f in merged]
        merged = kbest_select(merged, y, cfg, task, cap, scores=scores)
    return merged
