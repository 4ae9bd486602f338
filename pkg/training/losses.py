"""
Denoising score matching 목적함수
"""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import torch

from graph_data.model import GraphBatch
from sde.model import DiffusionState, VpSdeSchedule
from sde.vp_sde import marginal_coeffs, pair_mask, perturb, symmetric_noise
from utils.errors import NumericalError

ScoreFn = Callable[[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor], torch.Tensor]


@dataclass(frozen=True)
class TrainingInputs:
    t: torch.Tensor
    noise: torch.Tensor
    sigma: torch.Tensor
    state: DiffusionState


def sample_training_inputs(
    batch: GraphBatch,
    sched: VpSdeSchedule,
    t_eps: float,
    generator: torch.Generator | None = None,
) -> TrainingInputs:
    """t ~ U[t_eps, 1] per graph, symmetric noise, perturbed and quantized state."""
    A0 = batch.adjacency
    t = torch.rand(batch.size, generator=generator, dtype=A0.dtype, device=A0.device)
    t = t * (1.0 - t_eps) + t_eps
    noise = symmetric_noise(A0.shape, generator, batch.node_mask, dtype=A0.dtype, device=A0.device)
    state = perturb(A0, t, noise, sched, batch.node_mask)
    return TrainingInputs(t=t, noise=noise, sigma=marginal_coeffs(sched, t).sigma, state=state)


def lower_pair_mask(node_mask: torch.Tensor) -> torch.Tensor:
    return torch.tril(pair_mask(node_mask), diagonal=-1)


def dsm_objective(
    score: torch.Tensor,
    noise: torch.Tensor,
    sigma: torch.Tensor,
    node_mask: torch.Tensor,
    lambda_policy: Literal["sigma_squared", "uniform"] = "sigma_squared",
) -> torch.Tensor:
    """Per-graph lambda(t) * mean over real lower-triangle pairs of (s - target)**2.

    The target is -noise / sigma, so with lambda = sigma**2 the residual is
    sigma * s + noise, which stays bounded as sigma -> 0.
    """
    sigma = sigma.reshape(-1, 1, 1)
    if lambda_policy == "sigma_squared":
        residual = sigma * score + noise
    elif lambda_policy == "uniform":
        residual = score + noise / sigma
    else:
        raise ValueError(f"Unknown lambda policy: {lambda_policy}")

    mask = lower_pair_mask(node_mask).to(score.dtype)
    per_graph = (residual**2 * mask).sum(dim=(-1, -2)) / mask.sum(dim=(-1, -2)).clamp(min=1.0)
    return per_graph


def dsm_loss(
    score_fn: ScoreFn,
    batch: GraphBatch,
    sched: VpSdeSchedule,
    t_eps: float,
    lambda_policy: Literal["sigma_squared", "uniform"] = "sigma_squared",
    generator: torch.Generator | None = None,
) -> torch.Tensor:
    if batch.size == 0:
        raise ValueError("dsm_loss needs a non-empty batch")
    inputs = sample_training_inputs(batch, sched, t_eps, generator)
    state = inputs.state
    score = score_fn(state.A, state.A_bar, inputs.t, state.node_mask)
    per_graph = dsm_objective(score, inputs.noise, inputs.sigma, state.node_mask, lambda_policy)

    if not bool(torch.isfinite(per_graph).all()):
        bad = inputs.t[~torch.isfinite(per_graph)].tolist()
        raise NumericalError("non-finite denoising score matching loss", t=bad)
    return per_graph.mean()
