from .graph_features import (
    degree_onehot,
    edge_mask,
    edge_set,
    extract_features,
    landing_probabilities,
    random_walk_operator,
    spd_classes,
    spd_onehot,
    walk_powers,
)
from .model import GraphFeatures, RandomWalkOperator, WalkPowers

__all__ = [
    "GraphFeatures",
    "RandomWalkOperator",
    "WalkPowers",
    "degree_onehot",
    "edge_mask",
    "edge_set",
    "extract_features",
    "landing_probabilities",
    "random_walk_operator",
    "spd_classes",
    "spd_onehot",
    "walk_powers",
]
