import networkx as nx
import numpy as np
import pytest
import torch

from graph_data.model import GraphSample
from pgsn import PgsnConfig, PositionEnhancedScoreNetwork
from sde.model import DiffusionState, VpSdeSchedule
from sde.vp_sde import marginal_coeffs, pair_mask, perturb, symmetric_noise


@pytest.fixture
def sched() -> VpSdeSchedule:
    return VpSdeSchedule(beta_min=0.1, beta_max=20.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def generator() -> torch.Generator:
    return torch.Generator().manual_seed(1234)


@pytest.fixture
def small_cfg() -> PgsnConfig:
    return PgsnConfig(
        hidden_dim=16,
        num_layers=2,
        num_heads=4,
        rw_steps=6,
        max_nodes=10,
        time_embed_dim=16,
    )


def randomize_head(model: PositionEnhancedScoreNetwork, seed: int = 0) -> PositionEnhancedScoreNetwork:
    """The output layer starts at zero; give it weights so the score is not trivially 0."""
    gen = torch.Generator().manual_seed(seed)
    last = model.head[-1]
    with torch.no_grad():
        last.weight.copy_(torch.randn(last.weight.shape, generator=gen, dtype=last.weight.dtype))
        last.bias.copy_(torch.randn(last.bias.shape, generator=gen, dtype=last.bias.dtype))
    return model


def graph_from_nx(graph: nx.Graph, graph_id: int = 0) -> GraphSample:
    return GraphSample.from_networkx(nx.convert_node_labels_to_integers(graph), graph_id=graph_id)


def signed(adjacency: np.ndarray, dtype: torch.dtype = torch.float64) -> torch.Tensor:
    A = 2.0 * torch.as_tensor(adjacency, dtype=dtype) - 1.0
    A.fill_diagonal_(0.0)
    return A


def gaussian_score(mu: float, s: float, sched: VpSdeSchedule):
    """Exact score when every edge variable is N(mu, s**2) at t = 0."""

    def score_fn(A: torch.Tensor, A_bar: torch.Tensor, t: torch.Tensor, node_mask: torch.Tensor) -> torch.Tensor:
        alpha, sigma = marginal_coeffs(sched, t)
        alpha, sigma = alpha.reshape(-1, 1, 1), sigma.reshape(-1, 1, 1)
        var = alpha**2 * s**2 + sigma**2
        return -(A - alpha * mu) / var * pair_mask(node_mask).to(A.dtype)

    return score_fn


def lower_entries(A: torch.Tensor) -> torch.Tensor:
    n = A.shape[-1]
    rows, cols = torch.tril_indices(n, n, offset=-1)
    return A[..., rows, cols].reshape(-1)


def permute_pairs(x: torch.Tensor, perm: torch.Tensor) -> torch.Tensor:
    return x[:, perm][:, :, perm]


def max_equivariance_error(
    model: PositionEnhancedScoreNetwork,
    sched: VpSdeSchedule,
    triples: int = 100,
    seed: int = 0,
    max_nodes: int = 20,
) -> float:
    """Largest |score(P A P^T) - P score(A) P^T| over random (graph, t, permutation) triples."""
    dtype = next(model.parameters()).dtype
    gen = torch.Generator().manual_seed(seed)
    worst = 0.0
    with torch.no_grad():
        for _ in range(triples):
            n = int(torch.randint(2, max_nodes + 1, (1,), generator=gen))
            node_mask = torch.ones(1, n, dtype=torch.bool)
            edges = torch.tril((torch.rand(1, n, n, generator=gen) < 0.3).to(dtype), diagonal=-1)
            A0 = edges + edges.transpose(-1, -2)
            A0 = (2.0 * A0 - 1.0) * (1.0 - torch.eye(n, dtype=dtype))
            t = torch.rand(1, generator=gen, dtype=dtype)
            state = perturb(A0, t, symmetric_noise((1, n, n), gen, node_mask, dtype=dtype), sched, node_mask)

            perm = torch.randperm(n, generator=gen)
            permuted = DiffusionState(
                A=permute_pairs(state.A, perm),
                A_bar=permute_pairs(state.A_bar, perm),
                t=state.t,
                node_mask=node_mask,
            )
            expected = permute_pairs(model.score(state), perm)
            worst = max(worst, (model.score(permuted) - expected).abs().max().item())
    return worst
