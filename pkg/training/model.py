from dataclasses import dataclass
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field

from utils.config_loader import get_config


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    learning_rate: Annotated[float, Field(gt=0, description="Constant Adam learning rate")] = 2e-5
    ema_momentum: Annotated[float, Field(gt=0, lt=1, description="EMA momentum m")] = 0.9999
    batch_size: Annotated[int, Field(gt=0)] = 32
    total_steps: Annotated[int, Field(ge=0)] = 50_000
    t_eps: Annotated[float, Field(gt=0, lt=1, description="Smallest training time")] = 1e-5
    lambda_policy: Annotated[
        Literal["sigma_squared", "uniform"],
        Field(description="Loss weighting lambda(t)"),
    ] = "sigma_squared"
    seed: int = 0
    checkpoint_interval: Annotated[int, Field(gt=0)] = 5_000
    val_interval: Annotated[int, Field(gt=0)] = 1_000
    log_interval: Annotated[int, Field(gt=0)] = 100
    grad_clip: Annotated[float, Field(gt=0, description="Global gradient-norm clip")] = 1.0
    max_consecutive_skips: Annotated[int, Field(gt=0)] = 10
    device: str = Field(default_factory=lambda: get_config("runtime", "device", "cpu"))


@dataclass(frozen=True)
class StepResult:
    step: int
    loss: float
    grad_norm: float
    skipped: bool
