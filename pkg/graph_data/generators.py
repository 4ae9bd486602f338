"""
Community-small / Erdős–Rényi 그래프 데이터셋 생성기
"""

from dataclasses import dataclass, field

import numpy as np
from pydantic import ValidationError

from utils.config_loader import get_config
from utils.logger import logger_instance

from .model import GraphSample, NodeCountDistribution

logger = logger_instance()


def _symmetric_bernoulli(probabilities: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw the strict upper triangle independently, mirror it, zero diagonal."""
    draws = rng.random(probabilities.shape) < probabilities
    upper = np.triu(draws, k=1)
    return (upper | upper.T).astype(np.uint8)


@dataclass
class CommunityGraphGenerator:
    """Two equal-size ER communities joined by sparse random cross edges (config-driven defaults)."""

    sizes: list[int] = field(default_factory=list)
    p_intra: float | None = None
    p_inter: float | None = None

    def __post_init__(self):
        if not self.sizes:
            self.sizes = list(get_config("community_small", "sizes", [12, 14, 16, 18, 20]))
        if self.p_intra is None:
            self.p_intra = float(get_config("community_small", "p_intra", 0.7))
        if self.p_inter is None:
            self.p_inter = float(get_config("community_small", "p_inter", 0.05))

        if any(size % 2 for size in self.sizes):
            raise ValueError("community sizes must be even so both halves are equal")
        for name, prob in (("p_intra", self.p_intra), ("p_inter", self.p_inter)):
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {prob}")

    def _edge_probabilities(self, n: int) -> np.ndarray:
        community = np.arange(n) >= n // 2
        same = community[:, None] == community[None, :]
        return np.where(same, self.p_intra, self.p_inter)

    def generate(self, count: int, rng: np.random.Generator) -> list[GraphSample]:
        graphs: list[GraphSample] = []
        sizes = rng.choice(self.sizes, size=count)
        for graph_id, n in enumerate(sizes):
            while True:
                adjacency = _symmetric_bernoulli(self._edge_probabilities(int(n)), rng)
                try:
                    graphs.append(GraphSample(graph_id=graph_id, adjacency=adjacency))
                    break
                except ValidationError as e:
                    logger.warning(f"Regenerating community graph {graph_id}: {e}")
        logger.info(f"Generated {len(graphs)} community graphs (sizes {min(sizes)}..{max(sizes)})")
        return graphs


def gen_community_small(
    count: int = 100,
    rng: np.random.Generator | None = None,
    p_intra: float | None = None,
    p_inter: float | None = None,
) -> list[GraphSample]:
    rng = rng if rng is not None else np.random.default_rng()
    return CommunityGraphGenerator(p_intra=p_intra, p_inter=p_inter).generate(count, rng)


def gen_er(
    count: int,
    n: int | NodeCountDistribution,
    p: float,
    rng: np.random.Generator | None = None,
) -> list[GraphSample]:
    """G(n, p) graphs; ``n`` may be a node-count pmf to draw sizes from."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = rng if rng is not None else np.random.default_rng()
    if isinstance(n, NodeCountDistribution):
        if not n.support:
            raise ValueError("node count distribution has empty support")
        sizes = rng.choice(n.support, size=count, p=n.pmf)
    else:
        sizes = np.full(count, n)

    return [
        GraphSample(graph_id=graph_id, adjacency=_symmetric_bernoulli(np.full((int(size), int(size)), p), rng))
        for graph_id, size in enumerate(sizes)
    ]
