"""
그래프 인접행렬 위의 VP-SDE: 전방 섭동 커널, 스코어 타깃, 양자화, 역방향 drift
"""

import torch

from utils.errors import ContractViolationError, DomainError, ScoreSingularityError

from .model import DiffusionState, PerturbKernelParams, VpSdeSchedule

# (A + 1) / 2 > 0.5 in unit scale, i.e. A > 0 in signed scale
QUANTIZE_THRESHOLD: float = 0.5


def _as_time(t: float | torch.Tensor, like: torch.Tensor | None = None) -> torch.Tensor:
    if isinstance(t, torch.Tensor):
        t_tensor = t
    else:
        dtype = like.dtype if like is not None else torch.get_default_dtype()
        device = like.device if like is not None else None
        t_tensor = torch.tensor(t, dtype=dtype, device=device)
    if bool(((t_tensor < 0) | (t_tensor > 1)).any()):
        raise DomainError(f"time must lie in [0, 1], got {t_tensor.min().item()}..{t_tensor.max().item()}")
    return t_tensor


def _expand(coeff: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    """Broadcast a per-graph coefficient of shape (B,) over trailing (n, n) dims."""
    while coeff.dim() < target.dim():
        coeff = coeff.unsqueeze(-1)
    return coeff


def pair_mask(node_mask: torch.Tensor) -> torch.Tensor:
    """Off-diagonal pairs between real nodes."""
    pairs = node_mask.unsqueeze(-1) & node_mask.unsqueeze(-2)
    eye = torch.eye(node_mask.shape[-1], dtype=torch.bool, device=node_mask.device)
    return pairs & ~eye


def _full_mask(A: torch.Tensor) -> torch.Tensor:
    return torch.ones(A.shape[:-1], dtype=torch.bool, device=A.device)


def _check_symmetric(A: torch.Tensor, name: str) -> None:
    if A.shape[-1] != A.shape[-2]:
        raise ContractViolationError(f"{name} must be square, got shape {tuple(A.shape)}")
    if not torch.equal(A, A.transpose(-1, -2)):
        raise ContractViolationError(f"{name} must be symmetric")


def beta_at(sched: VpSdeSchedule, t: float | torch.Tensor) -> torch.Tensor:
    t = _as_time(t)
    return sched.beta_min + t * (sched.beta_max - sched.beta_min)


def integrated_beta(sched: VpSdeSchedule, t: float | torch.Tensor) -> torch.Tensor:
    t = _as_time(t)
    return sched.beta_min * t + 0.5 * t**2 * (sched.beta_max - sched.beta_min)


def marginal_coeffs(sched: VpSdeSchedule, t: float | torch.Tensor) -> PerturbKernelParams:
    """Closed-form (alpha_t, sigma_t) of the Gaussian perturbation kernel.

    sigma_t uses ``-expm1`` so that alpha_t**2 + sigma_t**2 == 1 up to rounding
    even when t is tiny.
    """
    log_alpha = -0.5 * integrated_beta(sched, t)
    alpha = torch.exp(log_alpha)
    sigma = torch.sqrt(-torch.expm1(2.0 * log_alpha))
    return PerturbKernelParams(alpha=alpha, sigma=sigma)


def symmetric_noise(
    shape: torch.Size | tuple[int, ...],
    generator: torch.Generator | None = None,
    node_mask: torch.Tensor | None = None,
    dtype: torch.dtype | None = None,
    device: torch.device | str | None = None,
) -> torch.Tensor:
    """Lower-triangle i.i.d. N(0, 1) mirrored to the upper triangle, zero diagonal."""
    z = torch.randn(shape, generator=generator, dtype=dtype, device=device)
    z = torch.tril(z, diagonal=-1)
    z = z + z.transpose(-1, -2)
    if node_mask is not None:
        z = z * pair_mask(node_mask).to(z.dtype)
    return z


def prior_sample(
    node_mask: torch.Tensor,
    generator: torch.Generator | None = None,
    dtype: torch.dtype | None = None,
) -> torch.Tensor:
    """A_1 ~ N(0, I) on the real off-diagonal pairs (the SDE equilibrium)."""
    n = node_mask.shape[-1]
    shape = (*node_mask.shape, n)
    return symmetric_noise(shape, generator, node_mask, dtype=dtype, device=node_mask.device)


def quantize(A: torch.Tensor, node_mask: torch.Tensor | None = None) -> torch.Tensor:
    unit = (A + 1.0) / 2.0
    mask = pair_mask(node_mask if node_mask is not None else _full_mask(A))
    return ((unit > QUANTIZE_THRESHOLD) & mask).to(A.dtype)


def perturb(
    A0: torch.Tensor,
    t: float | torch.Tensor,
    noise: torch.Tensor,
    sched: VpSdeSchedule,
    node_mask: torch.Tensor | None = None,
) -> DiffusionState:
    _check_symmetric(A0, "A0")
    _check_symmetric(noise, "noise")
    node_mask = node_mask if node_mask is not None else _full_mask(A0)
    t = _as_time(t, like=A0)

    alpha, sigma = marginal_coeffs(sched, t)
    A_t = _expand(alpha, A0) * A0 + _expand(sigma, A0) * noise
    # masked pairs keep the clean value, the diagonal stays at 0
    A_t = torch.where(pair_mask(node_mask), A_t, A0)
    A_t = A_t * (1.0 - torch.eye(A0.shape[-1], dtype=A0.dtype, device=A0.device))
    return DiffusionState(A=A_t, A_bar=quantize(A_t, node_mask), t=t, node_mask=node_mask)


def score_target(
    A_t: torch.Tensor,
    A0: torch.Tensor,
    t: float | torch.Tensor,
    sched: VpSdeSchedule,
    node_mask: torch.Tensor | None = None,
) -> torch.Tensor:
    """Conditional score of the perturbation kernel, -(A_t - alpha_t A0) / sigma_t**2."""
    t = _as_time(t, like=A_t)
    alpha, sigma = marginal_coeffs(sched, t)
    if bool((sigma == 0).any()):
        raise ScoreSingularityError("score target is undefined at t = 0; sample t >= t_eps")
    score = -(A_t - _expand(alpha, A_t) * A0) / _expand(sigma, A_t) ** 2
    mask = pair_mask(node_mask if node_mask is not None else _full_mask(A_t))
    return score * mask.to(score.dtype)


def reverse_drift(
    A: torch.Tensor,
    score: torch.Tensor,
    t: float | torch.Tensor,
    sched: VpSdeSchedule,
) -> torch.Tensor:
    """Drift of the reverse-time SDE, -1/2 beta(t) A - beta(t) score.

    G = sqrt(beta(t)) I does not depend on A, so the divergence term vanishes.
    """
    beta = _expand(beta_at(sched, _as_time(t, like=A)), A)
    return -0.5 * beta * A - beta * score
