from collections.abc import Callable

import torch

from pgsn import PositionEnhancedScoreNetwork
from sde.model import DiffusionState

ScoreFn = Callable[[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor], torch.Tensor]


class CountingScoreFn:
    """Wraps a score function ``(A, A_bar, t, node_mask) -> score`` and counts evaluations."""

    def __init__(self, score_fn: ScoreFn) -> None:
        self.score_fn = score_fn
        self.nfe = 0

    def __call__(self, A: torch.Tensor, A_bar: torch.Tensor, t: torch.Tensor, node_mask: torch.Tensor) -> torch.Tensor:
        self.nfe += 1
        return self.score_fn(A, A_bar, t, node_mask)


def model_score_fn(model: PositionEnhancedScoreNetwork) -> ScoreFn:
    """Frozen-parameter score function of a trained network."""
    model.eval()

    @torch.no_grad()
    def score_fn(A: torch.Tensor, A_bar: torch.Tensor, t: torch.Tensor, node_mask: torch.Tensor) -> torch.Tensor:
        return model.score(DiffusionState(A=A, A_bar=A_bar, t=t, node_mask=node_mask))

    return score_fn


def time_vector(t: float | torch.Tensor, like: torch.Tensor) -> torch.Tensor:
    """Per-graph time of shape (B,) matching ``like`` (B, n, n)."""
    t = torch.as_tensor(t, dtype=like.dtype, device=like.device)
    return t.expand(like.shape[0]) if t.dim() == 0 else t
