"""The reconstruction loop: cluster, cascade-select, generate, evaluate,
reward, train, cap the feature count; plus the random-selection baseline."""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .cluster import GroupPartition, cluster_from_mi
from .data import DataTable, FoldSplit, stratified_kfold
from .downstream import ForestConfig, evaluate_cv
from .expr import OPERATIONS, Leaf, Operation, parse_name, render_name
from .generate import Feature, generate_binary, generate_unary, postprocess
from .info import InfoConfig, discretize, mutual_information, target_labels, utility_from_mi
from .rl import AgentConfig, CascadeTransition, GroupAgent, OperationAgent, save_checkpoint, select_action, train_step
from .staterep import OP_DIM, SET_DIM, rep_feature_set, rep_operation

# One derived seed per subsystem; the index is mixed with the master seed.
SEED_STREAMS = ("folds", "forest", "agent1", "agent2", "agent3", "random_policy")


def derive_seeds(master: int) -> dict[str, int]:
    out = {}
    for i, name in enumerate(SEED_STREAMS):
        ss = np.random.SeedSequence([int(master), i])
        out[name] = int(ss.generate_state(1, dtype=np.uint32)[0])
    return out


@dataclass
class RunConfig:
    epochs: int = 30
    steps_per_epoch: int = 15
    stop_threshold: float | None = None  # None: median initial singleton distance, per step
    k: int | None = None  # None: ceil((|C1| + |C2|) / 2)
    n_folds: int = 5
    reset_each_epoch: bool = True
    info: InfoConfig = field(default_factory=InfoConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    forest: ForestConfig = field(default_factory=ForestConfig)
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.steps_per_epoch < 1:
            raise ValueError("epochs and steps_per_epoch must be >= 1")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1")
        if self.stop_threshold is not None and not self.stop_threshold > 0:
            raise ValueError("stop_threshold must be > 0")


@dataclass
class StepRecord:
    epoch: int
    step: int
    group1: list[str]
    operation: str
    group2: list[str]
    group1_index: int
    group2_index: int
    n_groups: int
    scenario: str
    n_generated: int
    r1: float
    r2: float
    r3: float
    utility_before: float
    utility_after: float
    v_a: float
    n_features: int
    epsilon: float


@dataclass
class RunReport:
    policy: str
    seed: int
    task: str
    original_arity: int
    records: list[StepRecord]
    best_score: float
    best_step: int
    best_features: list[str]
    wall_clock: float
    agents: dict = field(default_factory=dict, repr=False)

    KEYS = ("policy", "seed", "task", "original_arity", "records", "best_score", "best_step",
            "best_features", "wall_clock")

    def to_dict(self) -> dict:
        return {
            "policy": self.policy,
            "seed": self.seed,
            "task": self.task,
            "original_arity": self.original_arity,
            "records": [dataclasses.asdict(r) for r in self.records],
            "best_score": self.best_score,
            "best_step": self.best_step,
            "best_features": [{"name": n, "expression": n} for n in self.best_features],
            "wall_clock": self.wall_clock,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _InfoCache:
    """Binned labels, relevances and pairwise MI keyed by feature name.

    A name fully determines its values, so entries never go stale.
    """

    def __init__(self, y, cfg: InfoConfig, task):
        self.cfg = cfg
        self.y_labels = target_labels(y, cfg, task)
        self.labels: dict[str, np.ndarray] = {}
        self.rel: dict[str, float] = {}
        self.pair: dict[tuple[str, str], float] = {}

    def _ensure(self, f: Feature):
        name = f.name
        if name not in self.labels:
            self.labels[name] = discretize(f.values, self.cfg.n_bins)
            self.rel[name] = mutual_information(self.labels[name], self.y_labels)
        return name

    def relevance(self, f: Feature) -> float:
        return self.rel[self._ensure(f)]

    def matrices(self, features: list[Feature]):
        names = [self._ensure(f) for f in features]
        m = len(names)
        mi = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                key = (names[i], names[j]) if names[i] <= names[j] else (names[j], names[i])
                if key not in self.pair:
                    self.pair[key] = mutual_information(self.labels[key[0]], self.labels[key[1]])
                mi[i, j] = mi[j, i] = self.pair[key]
        return mi, np.array([self.rel[n] for n in names])

    def utility(self, features: list[Feature]) -> float:
        return utility_from_mi(*self.matrices(features))

    def partition(self, features: list[Feature], threshold) -> GroupPartition:
        mi, rel = self.matrices(features)
        return cluster_from_mi(mi, rel, self.cfg.epsilon, threshold)


def original_features(table: DataTable) -> list[Feature]:
    return [Feature(Leaf(n), table.X[:, i]) for i, n in enumerate(table.names)]


def features_from_names(table: DataTable, names) -> list[Feature]:
    from .expr import evaluate
    cols = table.columns
    exprs = [parse_name(n, table.names) for n in names]
    return [Feature(e, evaluate(e, cols)) for e in exprs]


class _Loop:
    def __init__(self, table: DataTable, cfg: RunConfig, policy: str):
        self.table, self.cfg, self.policy = table, cfg, policy
        self.seeds = derive_seeds(cfg.seed)
        self.forest_cfg = dataclasses.replace(cfg.forest, seed=self.seeds["forest"])
        self.folds: FoldSplit = stratified_kfold(table, cfg.n_folds, self.seeds["folds"])
        self.cache = _InfoCache(table.y, cfg.info, table.task)
        self.rng = np.random.default_rng(self.seeds["random_policy"])
        self.scores: dict[tuple[str, ...], float] = {}
        if policy == "grfg":
            acfg = cfg.agent
            self.agent1 = GroupAgent(SET_DIM, acfg, seed=self.seeds["agent1"])
            self.agent2 = OperationAgent(2 * SET_DIM, acfg, seed=self.seeds["agent2"])
            self.agent3 = GroupAgent(2 * SET_DIM + OP_DIM, acfg, seed=self.seeds["agent3"])

    def evaluate(self, features: list[Feature]) -> float:
        # fixed folds and seeds make the score a function of the ordered names
        key = tuple(f.name for f in features)
        if key not in self.scores:
            self.scores[key] = evaluate_cv(features, self.table.y, self.table.task, self.forest_cfg,
                                           self.folds).score
        return self.scores[key]

    def choose(self, agent, scores_fn, n: int, eps: float) -> int:
        if self.policy == "rdg":
            return int(self.rng.integers(n))
        return select_action(scores_fn(), eps, agent.rng)

    def run(self) -> RunReport:
        cfg, table = self.cfg, self.table
        start = time.perf_counter()
        d0 = table.original_arity
        records: list[StepRecord] = []
        best_score, best_step, best_feats = -np.inf, -1, []
        features = original_features(table)
        partition = None
        pending2 = pending3 = None
        global_step = 0
        for epoch in range(cfg.epochs):
            if cfg.reset_each_epoch and epoch > 0:
                features = original_features(table)
                partition = None
                pending2 = pending3 = None
            for step in range(cfg.steps_per_epoch):
                eps = cfg.agent.epsilon(global_step)
                if partition is None:
                    partition = self.cache.partition(features, cfg.stop_threshold)
                groups = [[features[i] for i in g] for g in partition]
                cand = np.stack([rep_feature_set([f.values for f in g]) for g in groups])
                s1 = rep_feature_set([f.values for f in features])

                g1 = self.choose(getattr(self, "agent1", None),
                                 lambda: self.agent1.scores(s1, cand), len(groups), eps)
                s2 = np.concatenate([s1, cand[g1]])
                if pending2 is not None:
                    pending2.next_state = s2
                    self.agent2.buffer.push(pending2)
                op_idx = self.choose(getattr(self, "agent2", None),
                                     lambda: self.agent2.scores(s2), len(OPERATIONS), eps)
                op = OPERATIONS[op_idx]
                s3 = np.concatenate([s2, rep_operation(op)])
                if pending3 is not None:
                    pending3.next_state = s3
                    pending3.next_candidates = cand
                    self.agent3.buffer.push(pending3)
                g2 = self.choose(getattr(self, "agent3", None),
                                 lambda: self.agent3.scores(s3, cand), len(groups), eps)

                C1, C2 = groups[g1], groups[g2]
                if op.arity == 2:
                    outcome = generate_binary(op, C1, C2, cfg.k)
                else:
                    outcome = generate_unary(op, C1, C2, table.y, cfg.info, table.task)
                new_features = postprocess(features, outcome, d0, table.y, cfg.info, table.task,
                                           relevance_fn=self.cache.relevance)

                u_before = self.cache.utility(features)
                u_after = self.cache.utility(new_features)
                v_a = self.evaluate(new_features)
                r1 = u_before
                r2 = u_after - u_before
                r3 = r2 + v_a

                next_partition = self.cache.partition(new_features, cfg.stop_threshold)
                if self.policy == "grfg":
                    next_s1 = rep_feature_set([f.values for f in new_features])
                    next_cand = np.stack([
                        rep_feature_set([new_features[i].values for i in g]) for g in next_partition
                    ])
                    self.agent1.buffer.push(CascadeTransition(s1, cand[g1], r1, next_s1, next_cand))
                    pending2 = CascadeTransition(s2, op_idx, r2, None)
                    pending3 = CascadeTransition(s3, cand[g2], r3, None)
                    for agent in (self.agent1, self.agent2, self.agent3):
                        if agent.buffer.ready():
                            for _ in range(cfg.agent.updates_per_step):
                                train_step(agent)

                records.append(StepRecord(
                    epoch=epoch, step=step,
                    group1=[f.name for f in C1], operation=op.name.lower(), group2=[f.name for f in C2],
                    group1_index=g1, group2_index=g2, n_groups=len(groups),
                    scenario=outcome.scenario.value, n_generated=len(outcome.new_columns),
                    r1=r1, r2=r2, r3=r3, utility_before=u_before, utility_after=u_after,
                    v_a=v_a, n_features=len(new_features), epsilon=eps,
                ))
                if v_a > best_score:
                    best_score, best_step, best_feats = v_a, global_step, [f.name for f in new_features]
                features, partition = new_features, next_partition
                global_step += 1

        agents = {}
        if self.policy == "grfg":
            agents = {"agent1": self.agent1, "agent2": self.agent2, "agent3": self.agent3}
        return RunReport(
            policy=self.policy, seed=cfg.seed, task=table.task.value, original_arity=d0,
            records=records, best_score=float(best_score), best_step=best_step, best_features=best_feats,
            wall_clock=time.perf_counter() - start, agents=agents,
        )


def run_grfg(table: DataTable, cfg: RunConfig = RunConfig()) -> RunReport:
    return _Loop(table, cfg, "grfg").run()


def run_rdg(table: DataTable, cfg: RunConfig = RunConfig()) -> RunReport:
    return _Loop(table, cfg, "rdg").run()


def evaluate_features(table: DataTable, names, cfg: RunConfig = RunConfig()) -> float:
    """Re-derive ``names`` from the raw table and score them with the run's folds and forest seeds."""
    seeds = derive_seeds(cfg.seed)
    folds = stratified_kfold(table, cfg.n_folds, seeds["folds"])
    forest_cfg = dataclasses.replace(cfg.forest, seed=seeds["forest"])
    feats = features_from_names(table, names) if names else original_features(table)
    return evaluate_cv(feats, table.y, table.task, forest_cfg, folds).score


def write_checkpoint(path, report: RunReport) -> None:
    save_checkpoint(path, report.agents, extra={"seed": report.seed, "steps": len(report.records)})
