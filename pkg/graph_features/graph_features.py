"""
양자화된 중간 그래프 A_bar_t 에서 구조/위치 특징을 추출
"""

import torch
import torch.nn.functional as F

from sde.vp_sde import pair_mask

from .model import GraphFeatures, RandomWalkOperator, WalkPowers


def random_walk_operator(A_bar: torch.Tensor, r: int) -> RandomWalkOperator:
    if r < 1:
        raise ValueError(f"random walk steps must be positive, got {r}")
    degree = A_bar.sum(dim=-2)
    inv_degree = torch.where(degree > 0, 1.0 / degree.clamp(min=1.0), torch.zeros_like(degree))
    return RandomWalkOperator(RW=A_bar * inv_degree.unsqueeze(-2), r=r)


def walk_powers(rw: RandomWalkOperator) -> WalkPowers:
    """RW^1..RW^r and the sparsity pattern of A_bar^1..A_bar^r.

    Reachability is propagated on the 0/1 pattern instead of reading RW^k > 0,
    because probabilities of long walks on large graphs underflow.
    """
    support = (rw.RW > 0).to(rw.RW.dtype)
    power = rw.RW
    reach = support
    probabilities = [power]
    reachable = [reach > 0]
    for _ in range(rw.r - 1):
        power = power @ rw.RW
        reach = (reach @ support).clamp(max=1.0)
        probabilities.append(power)
        reachable.append(reach > 0)
    return WalkPowers(
        probabilities=torch.stack(probabilities, dim=-1),
        reachable=torch.stack(reachable, dim=-1),
    )


def landing_probabilities(rw: RandomWalkOperator, powers: WalkPowers | None = None) -> torch.Tensor:
    """p[i, k-1] = (RW^k)_ii for k = 1..r, shape (..., n, r)."""
    powers = powers if powers is not None else walk_powers(rw)
    return torch.diagonal(powers.probabilities, dim1=-3, dim2=-2).transpose(-1, -2)


def spd_classes(rw: RandomWalkOperator, powers: WalkPowers | None = None) -> torch.Tensor:
    """Integer SPD class per pair: k - 1 for first reach at step k, r when unreachable or i == j."""
    powers = powers if powers is not None else walk_powers(rw)
    reach = powers.reachable
    first = torch.argmax(reach.long(), dim=-1)
    classes = torch.where(reach.any(dim=-1), first, torch.full_like(first, rw.r))
    n = classes.shape[-1]
    eye = torch.eye(n, dtype=torch.bool, device=classes.device)
    return classes.masked_fill(eye, rw.r)


def spd_onehot(rw: RandomWalkOperator, powers: WalkPowers | None = None) -> torch.Tensor:
    return F.one_hot(spd_classes(rw, powers), num_classes=rw.r + 1).to(rw.RW.dtype)


def degree_onehot(A_bar: torch.Tensor, max_degree: int) -> torch.Tensor:
    degree = A_bar.sum(dim=-1).round().long().clamp(max=max_degree)
    return F.one_hot(degree, num_classes=max_degree + 1).to(A_bar.dtype)


def edge_mask(
    A: torch.Tensor,
    gamma: float,
    node_mask: torch.Tensor | None = None,
) -> torch.Tensor:
    """Dense neighbour mask: real off-diagonal pairs whose unit value (A + 1) / 2 exceeds gamma.

    Unit values are clipped to [0, 1]; gamma <= 0 keeps every real pair.
    """
    node_mask = node_mask if node_mask is not None else torch.ones(A.shape[:-1], dtype=torch.bool, device=A.device)
    pairs = pair_mask(node_mask)
    if gamma <= 0:
        return pairs
    unit = ((A + 1.0) / 2.0).clamp(0.0, 1.0)
    return (unit > gamma) & pairs


def edge_set(A: torch.Tensor, gamma: float, node_mask: torch.Tensor | None = None) -> list[tuple[int, int]]:
    """Index pairs (i, j), i < j, of one graph kept for message passing."""
    if A.dim() != 2:
        raise ValueError("edge_set expects a single (n, n) matrix")
    upper = torch.triu(edge_mask(A, gamma, node_mask), diagonal=1)
    return [(int(i), int(j)) for i, j in upper.nonzero().tolist()]


def extract_features(
    A: torch.Tensor,
    A_bar: torch.Tensor,
    node_mask: torch.Tensor,
    rw_steps: int,
    max_degree: int,
    gamma: float,
) -> GraphFeatures:
    rw = random_walk_operator(A_bar, rw_steps)
    powers = walk_powers(rw)
    node_weight = node_mask.to(A_bar.dtype).unsqueeze(-1)
    node_pairs = node_mask.unsqueeze(-1) & node_mask.unsqueeze(-2)
    spd = spd_onehot(rw, powers) * node_pairs.to(A_bar.dtype).unsqueeze(-1)
    return GraphFeatures(
        degree_onehot=degree_onehot(A_bar, max_degree) * node_weight,
        landing=landing_probabilities(rw, powers) * node_weight,
        spd_onehot=spd,
        neighbours=edge_mask(A, gamma, node_mask),
    )
