from dataclasses import dataclass

import torch


@dataclass(frozen=True)
class RandomWalkOperator:
    """RW = A_bar D^-1 (column-normalized), zero columns for isolated nodes."""

    RW: torch.Tensor
    r: int


@dataclass(frozen=True)
class WalkPowers:
    """RW^k for k = 1..r stacked on the last axis, plus 0/1 reachability of A_bar^k."""

    probabilities: torch.Tensor
    reachable: torch.Tensor


@dataclass(frozen=True)
class GraphFeatures:
    degree_onehot: torch.Tensor
    landing: torch.Tensor
    spd_onehot: torch.Tensor
    neighbours: torch.Tensor
