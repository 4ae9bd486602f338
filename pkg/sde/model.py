from dataclasses import dataclass
from typing import Annotated, NamedTuple, Self

import torch
from pydantic import BaseModel, ConfigDict, Field, model_validator


class VpSdeSchedule(BaseModel):
    """Linear beta(t) schedule of the variance-preserving SDE on [0, T]."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    beta_min: Annotated[float, Field(gt=0, description="beta(0)")] = 0.1
    beta_max: Annotated[float, Field(gt=0, description="beta(T)")] = 20.0
    T: Annotated[float, Field(description="Terminal time")] = 1.0

    @model_validator(mode="after")
    def check_ordering(self) -> Self:
        if not self.beta_min < self.beta_max:
            raise ValueError("beta_min must be strictly smaller than beta_max")
        if self.T != 1.0:
            raise ValueError("terminal time is fixed at 1.0")
        return self


class PerturbKernelParams(NamedTuple):
    alpha: torch.Tensor
    sigma: torch.Tensor


@dataclass(frozen=True)
class DiffusionState:
    """A_t in signed scale, its quantized graph and the node mask, all batched."""

    A: torch.Tensor
    A_bar: torch.Tensor
    t: torch.Tensor
    node_mask: torch.Tensor
