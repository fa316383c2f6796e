"""
State descriptors and a single Q-learning agent
===============================================

Feature sets of any size are summarised into a fixed 49-number state. A small
Q-network is then trained on a three-armed bandit to show the update rule.
"""

import numpy as np

from grfg.rl import AgentConfig, CascadeTransition, OperationAgent, select_action, train_step
from grfg.staterep import rep_feature_set

rng = np.random.default_rng(2)

# column and row order do not matter to the descriptor
X = rng.standard_normal((100, 8))
state = rep_feature_set(list(X.T))
shuffled = rep_feature_set(list(X[rng.permutation(100)][:, rng.permutation(8)].T))
print("state length:", state.shape[0], "| permutation invariant:", state.tobytes() == shuffled.tobytes())

# a fixed-state bandit: only arm 1 pays
cfg = AgentConfig(gamma=0.0, seed=0)
agent = OperationAgent(49, cfg, n_actions=3)
rewards = [0.0, 1.0, 0.0]
for step in range(300):
    a = select_action(agent.scores(state), cfg.epsilon(step), agent.rng)
    agent.buffer.push(CascadeTransition(state, a, rewards[a], state))
    if agent.buffer.ready():
        train_step(agent)

print("Q values:", np.round(agent.scores(state), 3))
print("greedy arm:", int(np.argmax(agent.scores(state))))
