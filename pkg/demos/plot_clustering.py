"""
Mutual information and feature-group clustering
===============================================

Near-duplicate columns share a lot of information with each other and have
similar relevance to the target, so clustering gathers them into one group.
"""

import numpy as np

from grfg.cluster import m_clustering
from grfg.info import InfoConfig, mutual_information, relevance, utility

rng = np.random.default_rng(1)
n = 500

# three latent signals, each observed through three noisy copies
z = rng.standard_normal((n, 3))
features = [z[:, b] + 0.01 * rng.standard_normal(n) for b in range(3) for _ in range(3)]
y = 1.5 * z[:, 0] + z[:, 1]

cfg = InfoConfig()  # 20 equal-width bins, results in nats
print("MI of two identical label vectors:", mutual_information([0, 1, 2, 0], [0, 1, 2, 0]))
print("relevance per feature:", np.round([relevance(f, y, cfg) for f in features], 3))
print("utility of the whole set:", round(utility(features, y, cfg), 3))

# an explicit stop threshold separates within-block from cross-block distances
partition = m_clustering(features, y, cfg, stop_threshold=0.1)
print("groups:", partition.groups)

# the default threshold (median pairwise distance) keeps merging here
print("groups with default threshold:", m_clustering(features, y, cfg).groups)
