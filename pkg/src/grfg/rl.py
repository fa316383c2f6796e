"""Cascading Q-learning agents: a two-layer ReLU network trained with Adam on
semi-gradient TD targets drawn from a small replay memory."""

from __future__ import annotations

import io
import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .staterep import OP_DIM, SET_DIM

PARAM_NAMES = ("W1", "b1", "W2", "b2")


class Mlp:
    """``layer2(relu(layer1(x)))``; weights stored input-major (x @ W)."""

    def __init__(self, input_dim: int, output_dim: int, hidden_dim: int = 64, rng=None, zero: bool = False):
        self.input_dim, self.hidden_dim, self.output_dim = input_dim, hidden_dim, output_dim
        if zero:
            self.params = {
                "W1": np.zeros((input_dim, hidden_dim)), "b1": np.zeros(hidden_dim),
                "W2": np.zeros((hidden_dim, output_dim)), "b2": np.zeros(output_dim),
            }
            return
        rng = np.random.default_rng(rng)
        k1, k2 = 1 / np.sqrt(input_dim), 1 / np.sqrt(hidden_dim)
        self.params = {
            "W1": rng.uniform(-k1, k1, (input_dim, hidden_dim)),
            "b1": rng.uniform(-k1, k1, hidden_dim),
            "W2": rng.uniform(-k2, k2, (hidden_dim, output_dim)),
            "b2": rng.uniform(-k2, k2, output_dim),
        }

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.input_dim:
            raise ValueError(f"expected input dim {self.input_dim}, got {x.shape[-1]}")
        return x

    def forward(self, x) -> np.ndarray:
        x = self._check(x)
        p = self.params
        return np.maximum(x @ p["W1"] + p["b1"], 0.0) @ p["W2"] + p["b2"]

    def backward(self, x, upstream) -> dict[str, np.ndarray]:
        """Gradients of ``sum(upstream * forward(x))`` w.r.t. every parameter.

        ``x`` may be a single vector or a (batch, input_dim) matrix.
        """
        x = self._check(x)
        single = x.ndim == 1
        x2 = x[None, :] if single else x
        g = np.asarray(upstream, dtype=float).reshape(x2.shape[0], self.output_dim)
        p = self.params
        pre = x2 @ p["W1"] + p["b1"]
        h = np.maximum(pre, 0.0)
        dh = (g @ p["W2"].T) * (pre > 0)
        return {"W1": x2.T @ dh, "b1": dh.sum(axis=0), "W2": h.T @ g, "b2": g.sum(axis=0)}


def mlp_forward(net: Mlp, x) -> np.ndarray:
    return net.forward(x)


def mlp_backward(net: Mlp, x, upstream) -> dict[str, np.ndarray]:
    return net.backward(x, upstream)


class AdamState:
    def __init__(self, params: dict, lr: float = 0.01, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}


def adam_step(opt: AdamState, params: dict, grads: dict) -> dict:
    """Bias-corrected Adam update; ``params`` is updated in place and returned."""
    opt.t += 1
    c1 = 1 - opt.beta1 ** opt.t
    c2 = 1 - opt.beta2 ** opt.t
    for k, g in grads.items():
        if g.shape != params[k].shape:
            raise ValueError(f"gradient shape mismatch for {k}")
        opt.m[k] = opt.beta1 * opt.m[k] + (1 - opt.beta1) * g
        opt.v[k] = opt.beta2 * opt.v[k] + (1 - opt.beta2) * g * g
        params[k] -= opt.lr * (opt.m[k] / c1) / (np.sqrt(opt.v[k] / c2) + opt.eps)
    return params


@dataclass
class CascadeTransition:
    state: np.ndarray
    action: np.ndarray | int  # candidate representation for group agents, op index otherwise
    reward: float
    next_state: np.ndarray
    next_candidates: np.ndarray | None = None  # (k, 49) for group agents


class ReplayBuffer:
    def __init__(self, capacity: int = 32, batch_size: int = 8):
        self.capacity, self.batch_size = capacity, batch_size
        self.items: deque[CascadeTransition] = deque(maxlen=capacity)

    def push(self, t: CascadeTransition) -> None:
        self.items.append(t)

    def __len__(self):
        return len(self.items)

    def ready(self) -> bool:
        return len(self.items) >= self.batch_size

    def sample(self, rng: np.random.Generator) -> list[CascadeTransition]:
        if not self.ready():
            raise ValueError(f"buffer holds {len(self)} transitions, need {self.batch_size}")
        idx = rng.choice(len(self.items), self.batch_size, replace=False)
        return [self.items[i] for i in idx]


@dataclass
class AgentConfig:
    gamma: float = 0.9
    epsilon_start: float = 0.5
    epsilon_decay: float = 0.99
    epsilon_floor: float = 0.05
    hidden_dim: int = 64
    lr: float = 0.01
    memory: int = 32
    batch_size: int = 8
    seed: int = 0
    input_transform: str = "signed_log"  # or "none"
    updates_per_step: int = 1

    def __post_init__(self):
        if self.input_transform not in ("signed_log", "none"):
            raise ValueError("input_transform must be 'signed_log' or 'none'")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if not 0.0 <= self.epsilon_floor <= self.epsilon_start <= 1.0:
            raise ValueError("need 0 <= epsilon_floor <= epsilon_start <= 1")

    def epsilon(self, step: int) -> float:
        return max(self.epsilon_floor, self.epsilon_start * self.epsilon_decay ** step)


def signed_log(x):
    """sign(x) * log(1 + |x|): keeps state statistics spanning 1e-3..1e12 on one scale."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.log1p(np.abs(x))


class _Agent:
    def __init__(self, input_dim: int, output_dim: int, cfg: AgentConfig, seed=None, zero: bool = False):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed if seed is None else seed)
        self.net = Mlp(input_dim, output_dim, cfg.hidden_dim, rng=self.rng, zero=zero)
        self.opt = AdamState(self.net.params, lr=cfg.lr)
        self.buffer = ReplayBuffer(cfg.memory, cfg.batch_size)

    def prepare(self, x):
        return signed_log(x) if self.cfg.input_transform == "signed_log" else np.asarray(x, dtype=float)


class GroupAgent(_Agent):
    """Scores (state, candidate group) pairs with a scalar head, so the number
    of candidate groups may change from step to step."""

    def __init__(self, state_dim: int, cfg: AgentConfig = AgentConfig(), seed=None, zero: bool = False):
        self.state_dim = state_dim
        super().__init__(state_dim + SET_DIM, 1, cfg, seed, zero)

    def scores(self, state, candidates) -> np.ndarray:
        state = np.asarray(state, dtype=float)
        cands = np.atleast_2d(np.asarray(candidates, dtype=float))
        if state.shape != (self.state_dim,):
            raise ValueError(f"expected state dim {self.state_dim}, got {state.shape}")
        if cands.shape[1] != SET_DIM:
            raise ValueError(f"candidate representations must have dim {SET_DIM}")
        x = np.hstack([np.repeat(state[None, :], len(cands), axis=0), cands])
        return self.net.forward(self.prepare(x))[:, 0]

    def _q_and_inputs(self, batch):
        x = self.prepare(np.stack([np.concatenate([t.state, t.action]) for t in batch]))
        return self.net.forward(x)[:, 0], x

    def _next_max(self, t: CascadeTransition) -> float:
        if t.next_candidates is None or len(t.next_candidates) == 0:
            return 0.0
        return float(self.scores(t.next_state, t.next_candidates).max())


class OperationAgent(_Agent):
    """Fixed head with one Q value per action (the 14 operations by default)."""

    def __init__(self, state_dim: int = 2 * SET_DIM, cfg: AgentConfig = AgentConfig(), n_actions: int = OP_DIM,
                 seed=None, zero: bool = False):
        self.state_dim, self.n_actions = state_dim, n_actions
        super().__init__(state_dim, n_actions, cfg, seed, zero)

    def scores(self, state) -> np.ndarray:
        state = np.asarray(state, dtype=float)
        if state.shape != (self.state_dim,):
            raise ValueError(f"expected state dim {self.state_dim}, got {state.shape}")
        return self.net.forward(self.prepare(state))

    def _q_and_inputs(self, batch):
        x = self.prepare(np.stack([t.state for t in batch]))
        out = self.net.forward(x)
        return out[np.arange(len(batch)), [int(t.action) for t in batch]], x

    def _next_max(self, t: CascadeTransition) -> float:
        return float(self.scores(t.next_state).max())


def q_score_group(agent: GroupAgent, state, candidate_rep) -> float:
    return float(agent.scores(state, np.asarray(candidate_rep)[None, :])[0])


def q_scores_operation(agent: OperationAgent, state) -> np.ndarray:
    return agent.scores(state)


def select_action(scores, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy choice; greedy ties go to the lowest index."""
    scores = np.asarray(scores, dtype=float)
    if scores.size == 0:
        raise ValueError("no candidates to choose from")
    if rng.random() < epsilon:
        return int(rng.integers(scores.size))
    return int(np.argmax(scores))


def td_targets(agent, batch) -> np.ndarray:
    return np.array([t.reward + agent.cfg.gamma * agent._next_max(t) for t in batch])


def td_loss(agent, batch) -> float:
    q, _ = agent._q_and_inputs(batch)
    return float(np.mean((q - td_targets(agent, batch)) ** 2))


def train_on_batch(agent, batch) -> float:
    """One Adam step on the mean squared TD error; the bootstrap term is held fixed."""
    targets = td_targets(agent, batch)
    q, x = agent._q_and_inputs(batch)
    err = q - targets
    upstream = np.zeros((len(batch), agent.net.output_dim))
    if isinstance(agent, OperationAgent):
        upstream[np.arange(len(batch)), [int(t.action) for t in batch]] = 2 * err / len(batch)
    else:
        upstream[:, 0] = 2 * err / len(batch)
    adam_step(agent.opt, agent.net.params, agent.net.backward(x, upstream))
    return float(np.mean(err ** 2))


def train_step(agent, buffer: ReplayBuffer | None = None) -> float:
    buffer = agent.buffer if buffer is None else buffer
    return train_on_batch(agent, buffer.sample(agent.rng))


def save_checkpoint(path_or_file, agents: dict[str, _Agent], extra: dict | None = None) -> None:
    """Write every agent's weights, Adam moments, step count and RNG state to one
    ``.npz`` archive. Keys are ``<agent>/<param>``, ``<agent>/adam_m/<param>``,
    ``<agent>/adam_v/<param>``, ``<agent>/adam_t`` and ``<agent>/rng`` (JSON text)."""
    arrays = {}
    for name, agent in agents.items():
        for k in PARAM_NAMES:
            arrays[f"{name}/{k}"] = agent.net.params[k]
            arrays[f"{name}/adam_m/{k}"] = agent.opt.m[k]
            arrays[f"{name}/adam_v/{k}"] = agent.opt.v[k]
        arrays[f"{name}/adam_t"] = np.array(agent.opt.t)
        arrays[f"{name}/rng"] = np.array(json.dumps(agent.rng.bit_generator.state))
    arrays["meta"] = np.array(json.dumps(extra or {}))
    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "wb") as fh:
            np.savez(fh, **arrays)
    else:
        np.savez(path_or_file, **arrays)


def load_checkpoint(path_or_file, agents: dict[str, _Agent]) -> dict:
    """Restore agents in place from :func:`save_checkpoint` output; returns the meta dict."""
    if isinstance(path_or_file, (bytes, bytearray)):
        path_or_file = io.BytesIO(path_or_file)
    with np.load(path_or_file, allow_pickle=False) as z:
        for name, agent in agents.items():
            for k in PARAM_NAMES:
                agent.net.params[k] = z[f"{name}/{k}"].copy()
                agent.opt.m[k] = z[f"{name}/adam_m/{k}"].copy()
                agent.opt.v[k] = z[f"{name}/adam_v/{k}"].copy()
            agent.opt.t = int(z[f"{name}/adam_t"])
            agent.rng.bit_generator.state = json.loads(str(z[f"{name}/rng"]))
        return json.loads(str(z["meta"]))
