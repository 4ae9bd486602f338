"""
역방향 SDE 샘플러: Euler-Maruyama predictor + Langevin corrector
"""

from dataclasses import dataclass

import torch

from graph_data.model import NodeCountDistribution
from sde.model import VpSdeSchedule
from sde.vp_sde import beta_at, pair_mask, prior_sample, quantize, symmetric_noise
from utils.errors import SamplerError
from utils.logger import logger_instance

from .model import SamplerConfig
from .score_fn import CountingScoreFn, ScoreFn, time_vector

logger = logger_instance()


@dataclass(frozen=True)
class SamplerOutput:
    """Terminal continuous state, its quantized graph and the score evaluation count."""

    A: torch.Tensor
    A_bar: torch.Tensor
    nfe: int


def _per_graph(value: torch.Tensor) -> torch.Tensor:
    return value.reshape(-1, 1, 1)


def em_step(
    A: torch.Tensor,
    t: float | torch.Tensor,
    dt: float,
    score_fn: ScoreFn,
    sched: VpSdeSchedule,
    generator: torch.Generator | None,
    node_mask: torch.Tensor,
    step_index: int | None = None,
) -> torch.Tensor:
    """A_{t-dt} = A + [beta/2 A + beta s] dt + sqrt(beta dt) z, with A_bar recomputed for the score."""
    if dt < 0:
        raise ValueError(f"dt must be nonnegative, got {dt}")
    t_vec = time_vector(t, A)
    score = score_fn(A, quantize(A, node_mask), t_vec, node_mask)
    beta = _per_graph(beta_at(sched, t_vec))
    z = symmetric_noise(A.shape, generator, node_mask, dtype=A.dtype, device=A.device)

    update = (0.5 * beta * A + beta * score) * dt + torch.sqrt(beta * dt) * z
    A_next = A + update * pair_mask(node_mask).to(A.dtype)
    if not bool(torch.isfinite(A_next).all()):
        raise SamplerError(f"non-finite state after predictor step {step_index}")
    return A_next


def langevin_correct(
    A: torch.Tensor,
    t: float | torch.Tensor,
    score_fn: ScoreFn,
    snr_r: float,
    steps: int,
    generator: torch.Generator | None,
    node_mask: torch.Tensor,
) -> torch.Tensor:
    """Langevin MCMC at fixed t with step eps = 2 (r ||z|| / ||s||)**2 per graph."""
    t_vec = time_vector(t, A)
    mask = pair_mask(node_mask).to(A.dtype)
    for _ in range(steps):
        z = symmetric_noise(A.shape, generator, node_mask, dtype=A.dtype, device=A.device)
        score = score_fn(A, quantize(A, node_mask), t_vec, node_mask) * mask

        z_norm = torch.linalg.matrix_norm(z)
        s_norm = torch.linalg.matrix_norm(score)
        degenerate = s_norm == 0
        if bool(degenerate.any()):
            logger.warning(f"Zero score norm at t={t_vec.max().item():.4f}; skipped corrector step for {int(degenerate.sum())} graph(s)")
        eps = 2.0 * (snr_r * z_norm / torch.where(degenerate, torch.ones_like(s_norm), s_norm)) ** 2
        eps = _per_graph(torch.where(degenerate, torch.zeros_like(eps), eps))
        A = A + eps * score + torch.sqrt(2.0 * eps) * z
    return A


def reverse_sde_sample(
    score_fn: ScoreFn,
    node_mask: torch.Tensor,
    cfg: SamplerConfig,
    sched: VpSdeSchedule,
    generator: torch.Generator | None = None,
    dtype: torch.dtype = torch.float32,
    corrector_steps: int | None = None,
) -> SamplerOutput:
    """Integrate the reverse SDE from t = 1 down to t_end on the grid linspace(1, t_end, num_steps + 1)."""
    corrector_steps = cfg.corrector_steps_per_iter if corrector_steps is None else corrector_steps
    counting = CountingScoreFn(score_fn)
    A = prior_sample(node_mask, generator, dtype=dtype)
    grid = torch.linspace(1.0, cfg.t_end, cfg.num_steps + 1, dtype=torch.float64).tolist()

    for index in range(cfg.num_steps):
        t, t_next = grid[index], grid[index + 1]
        A = em_step(A, t, t - t_next, counting, sched, generator, node_mask, step_index=index)
        if corrector_steps:
            A = langevin_correct(A, t_next, counting, cfg.snr_r, corrector_steps, generator, node_mask)
    return SamplerOutput(A=A, A_bar=quantize(A, node_mask), nfe=counting.nfe)


def pc_sample(
    score_fn: ScoreFn,
    node_mask: torch.Tensor,
    cfg: SamplerConfig,
    sched: VpSdeSchedule,
    generator: torch.Generator | None = None,
    dtype: torch.dtype = torch.float32,
) -> SamplerOutput:
    return reverse_sde_sample(score_fn, node_mask, cfg, sched, generator, dtype)


def em_sample(
    score_fn: ScoreFn,
    node_mask: torch.Tensor,
    cfg: SamplerConfig,
    sched: VpSdeSchedule,
    generator: torch.Generator | None = None,
    dtype: torch.dtype = torch.float32,
) -> SamplerOutput:
    return reverse_sde_sample(score_fn, node_mask, cfg, sched, generator, dtype, corrector_steps=0)


def sample_node_count(
    dist: NodeCountDistribution,
    generator: torch.Generator | None = None,
    count: int = 1,
) -> list[int]:
    if not dist.support:
        raise ValueError("node count distribution has empty support")
    pmf = torch.tensor(dist.pmf, dtype=torch.float64)
    indices = torch.multinomial(pmf, count, replacement=True, generator=generator)
    return [dist.support[i] for i in indices.tolist()]


def node_mask_from_counts(node_counts: list[int], device: torch.device | str | None = None) -> torch.Tensor:
    size = max(node_counts)
    arange = torch.arange(size, device=device)
    return arange.unsqueeze(0) < torch.tensor(node_counts, device=device).unsqueeze(1)
