import torch
import torch.nn as nn


class ExponentialMovingAverage:
    """
    Shadow copy of the model parameters used for sampling.

    ema <- m * ema + (1 - m) * params after every optimizer step.
    """

    def __init__(self, model: nn.Module, momentum: float) -> None:
        if not 0.0 <= momentum <= 1.0:
            raise ValueError(f"EMA momentum must lie in [0, 1], got {momentum}")
        self.momentum = momentum
        self.shadow: dict[str, torch.Tensor] = {
            name: param.detach().clone() for name, param in model.named_parameters()
        }

    @torch.no_grad()
    def update(self, model: nn.Module) -> None:
        for name, param in model.named_parameters():
            self.shadow[name].mul_(self.momentum).add_(param.detach(), alpha=1.0 - self.momentum)

    @torch.no_grad()
    def copy_to(self, model: nn.Module) -> None:
        for name, param in model.named_parameters():
            param.copy_(self.shadow[name])

    def state_dict(self) -> dict[str, torch.Tensor]:
        return {name: tensor.clone() for name, tensor in self.shadow.items()}

    def load_state_dict(self, state: dict[str, torch.Tensor]) -> None:
        missing = set(self.shadow) - set(state)
        if missing:
            raise KeyError(f"EMA state is missing parameters: {sorted(missing)}")
        for name in self.shadow:
            shadow = self.shadow[name]
            self.shadow[name] = state[name].detach().clone().to(device=shadow.device, dtype=shadow.dtype)
