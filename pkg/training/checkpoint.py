from dataclasses import dataclass
from pathlib import Path
from typing import Any

import torch

from pgsn import PgsnConfig, PositionEnhancedScoreNetwork
from sde.model import VpSdeSchedule
from utils.logger import logger_instance

from .ema import ExponentialMovingAverage
from .model import TrainConfig

logger = logger_instance()


@dataclass
class Checkpoint:
    pgsn_config: PgsnConfig
    train_config: TrainConfig
    schedule: VpSdeSchedule
    model_state: dict[str, torch.Tensor]
    ema_state: dict[str, torch.Tensor]
    optimizer_state: dict[str, Any]
    step: int
    generator_state: torch.Tensor

    @property
    def dtype(self) -> torch.dtype:
        return next(tensor.dtype for tensor in self.model_state.values() if tensor.is_floating_point())

    def build_model(self, use_ema: bool = True, device: str | torch.device = "cpu") -> PositionEnhancedScoreNetwork:
        """Network carrying the EMA weights (sampling) or the raw training weights."""
        model = PositionEnhancedScoreNetwork(self.pgsn_config).to(dtype=self.dtype)
        model.load_state_dict(self.model_state)
        if use_ema:
            ema = ExponentialMovingAverage(model, self.train_config.ema_momentum)
            ema.load_state_dict(self.ema_state)
            ema.copy_to(model)
        return model.to(device).eval()


def save_checkpoint(checkpoint: Checkpoint, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    torch.save(
        {
            "pgsn_config": checkpoint.pgsn_config.model_dump(),
            "train_config": checkpoint.train_config.model_dump(),
            "schedule": checkpoint.schedule.model_dump(),
            "model": checkpoint.model_state,
            "ema": checkpoint.ema_state,
            "optimizer": checkpoint.optimizer_state,
            "step": checkpoint.step,
            "generator_state": checkpoint.generator_state,
        },
        path,
    )
    logger.info(f"Checkpoint saved at step {checkpoint.step}: {path}")
    return path


def load_checkpoint(path: str | Path, map_location: str | torch.device = "cpu") -> Checkpoint:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint not found: {path}")
    payload = torch.load(path, map_location=map_location, weights_only=True)
    return Checkpoint(
        pgsn_config=PgsnConfig.model_validate(payload["pgsn_config"]),
        train_config=TrainConfig.model_validate(payload["train_config"]),
        schedule=VpSdeSchedule.model_validate(payload["schedule"]),
        model_state=payload["model"],
        ema_state=payload["ema"],
        optimizer_state=payload["optimizer"],
        step=int(payload["step"]),
        generator_state=payload["generator_state"],
    )
