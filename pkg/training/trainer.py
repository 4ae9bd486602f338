"""
PGSN 스코어 네트워크 학습 루프 (DSM + Adam + EMA)
"""

import time
from pathlib import Path

import numpy as np
import torch

from graph_data.batching import pad_graphs
from graph_data.model import DatasetSplit, GraphSample
from pgsn import PgsnConfig, PositionEnhancedScoreNetwork
from sde.model import VpSdeSchedule
from utils.errors import TrainingAbortedError
from utils.logger import logger_instance
from utils.serializer import dumps_record

from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .ema import ExponentialMovingAverage
from .losses import dsm_loss
from .model import StepResult, TrainConfig

logger = logger_instance()

CHECKPOINT_NAME = "checkpoint.pt"
TRAIN_LOG_NAME = "train_log.jsonl"


class ScoreTrainer:
    """Single training controller owning the parameters, optimizer, EMA and random source."""

    def __init__(
        self,
        pgsn_cfg: PgsnConfig,
        train_cfg: TrainConfig,
        sched: VpSdeSchedule,
        dtype: torch.dtype = torch.float32,
    ) -> None:
        self.pgsn_cfg = pgsn_cfg
        self.cfg = train_cfg
        self.sched = sched
        self.dtype = dtype
        self.device = torch.device(train_cfg.device)

        torch.manual_seed(train_cfg.seed)
        self.model = PositionEnhancedScoreNetwork(pgsn_cfg).to(device=self.device, dtype=dtype)
        self.optimizer = torch.optim.Adam(self.model.parameters(), lr=train_cfg.learning_rate)
        self.ema = ExponentialMovingAverage(self.model, train_cfg.ema_momentum)
        self.generator = torch.Generator(device=self.device).manual_seed(train_cfg.seed)

        self.step = 0
        self.consecutive_skips = 0
        self.skipped_steps = 0

    @classmethod
    def from_checkpoint(
        cls,
        path: str | Path,
        train_cfg: TrainConfig | None = None,
        dtype: torch.dtype | None = None,
    ) -> "ScoreTrainer":
        """Rebuild the trainer; ``dtype`` defaults to the precision the checkpoint was trained in."""
        checkpoint = load_checkpoint(path)
        if dtype is None:
            dtype = checkpoint.dtype
        trainer = cls(checkpoint.pgsn_config, train_cfg or checkpoint.train_config, checkpoint.schedule, dtype=dtype)
        trainer.model.load_state_dict(checkpoint.model_state)
        trainer.optimizer.load_state_dict(checkpoint.optimizer_state)
        trainer.ema.load_state_dict(checkpoint.ema_state)
        trainer.generator.set_state(checkpoint.generator_state)
        trainer.step = checkpoint.step
        logger.info(f"Resumed training from {path} at step {trainer.step}")
        return trainer

    def checkpoint(self) -> Checkpoint:
        return Checkpoint(
            pgsn_config=self.pgsn_cfg,
            train_config=self.cfg,
            schedule=self.sched,
            model_state={name: tensor.detach().clone() for name, tensor in self.model.state_dict().items()},
            ema_state=self.ema.state_dict(),
            optimizer_state=self.optimizer.state_dict(),
            step=self.step,
            generator_state=self.generator.get_state(),
        )

    def _loss(self, graphs: list[GraphSample], generator: torch.Generator) -> torch.Tensor:
        batch = pad_graphs(graphs, dtype=self.dtype, device=self.device)
        return dsm_loss(
            self.model,
            batch,
            self.sched,
            t_eps=self.cfg.t_eps,
            lambda_policy=self.cfg.lambda_policy,
            generator=generator,
        )

    def train_step(self, graphs: list[GraphSample]) -> StepResult:
        """One Adam step at the configured rate followed by the EMA update.

        A non-finite gradient skips the update; too many consecutive skips abort.
        """
        self.model.train()
        self.optimizer.zero_grad(set_to_none=True)
        loss = self._loss(graphs, self.generator)
        loss.backward()
        grad_norm = torch.nn.utils.clip_grad_norm_(self.model.parameters(), self.cfg.grad_clip)

        self.step += 1
        if not bool(torch.isfinite(grad_norm)):
            self.optimizer.zero_grad(set_to_none=True)
            self.consecutive_skips += 1
            self.skipped_steps += 1
            logger.warning(
                f"Skipping step {self.step}: non-finite gradient norm "
                f"({self.consecutive_skips} consecutive, {self.skipped_steps} total)"
            )
            if self.consecutive_skips >= self.cfg.max_consecutive_skips:
                logger.error(f"Aborting after {self.consecutive_skips} consecutive skipped steps")
                raise TrainingAbortedError(f"{self.consecutive_skips} consecutive non-finite gradient steps")
            return StepResult(step=self.step, loss=float(loss.detach()), grad_norm=float(grad_norm), skipped=True)

        self.consecutive_skips = 0
        self.optimizer.step()
        self.ema.update(self.model)
        return StepResult(step=self.step, loss=float(loss.detach()), grad_norm=float(grad_norm), skipped=False)

    @torch.no_grad()
    def validation_loss(self, graphs: list[GraphSample]) -> float:
        """Mean DSM loss on ``graphs`` with a fixed random source (comparable across steps)."""
        if not graphs:
            return float("nan")
        self.model.eval()
        generator = torch.Generator(device=self.device).manual_seed(self.cfg.seed + 1)
        losses: list[float] = []
        for start in range(0, len(graphs), self.cfg.batch_size):
            chunk = graphs[start : start + self.cfg.batch_size]
            losses.append(float(self._loss(chunk, generator)) * len(chunk))
        return sum(losses) / len(graphs)

    def _draw_batch(self, graphs: list[GraphSample]) -> list[GraphSample]:
        if self.cfg.batch_size <= len(graphs):
            indices = torch.randperm(len(graphs), generator=self.generator, device=self.device)[: self.cfg.batch_size]
        else:
            indices = torch.randint(len(graphs), (self.cfg.batch_size,), generator=self.generator, device=self.device)
        return [graphs[i] for i in indices.tolist()]

    def fit(self, split: DatasetSplit, out_dir: str | Path) -> Path:
        """Train until ``total_steps`` with periodic validation, logging and checkpointing.

        Returns:
            Path: final checkpoint (its EMA weights are the ones used for sampling)
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        checkpoint_path = out_dir / CHECKPOINT_NAME
        if not split.train:
            raise ValueError("training split is empty")

        logger.info(
            f"Training PGSN ({self.model.num_parameters()} parameters) "
            f"from step {self.step} to {self.cfg.total_steps} on {len(split.train)} graphs"
        )
        started = time.perf_counter()
        recent: list[float] = []
        with open(out_dir / TRAIN_LOG_NAME, "ab") as train_log:
            while self.step < self.cfg.total_steps:
                result = self.train_step(self._draw_batch(split.train))
                if not result.skipped:
                    recent.append(result.loss)

                val_loss = None
                if result.step % self.cfg.val_interval == 0:
                    val_loss = self.validation_loss(split.val)
                if result.step % self.cfg.log_interval == 0 or val_loss is not None:
                    record = {
                        "step": result.step,
                        "loss": float(np.mean(recent)) if recent else float("nan"),
                        "val_loss": val_loss,
                        "wall_time": time.perf_counter() - started,
                    }
                    train_log.write(dumps_record(record))
                    train_log.flush()
                    logger.info(f"step {result.step}: loss={record['loss']:.5f} val_loss={val_loss}")
                    recent.clear()
                if result.step % self.cfg.checkpoint_interval == 0:
                    save_checkpoint(self.checkpoint(), checkpoint_path)

        save_checkpoint(self.checkpoint(), checkpoint_path)
        return checkpoint_path


def fit(
    split: DatasetSplit,
    train_cfg: TrainConfig,
    pgsn_cfg: PgsnConfig,
    sched: VpSdeSchedule,
    out_dir: str | Path,
    resume_from: str | Path | None = None,
) -> Path:
    if resume_from is not None:
        trainer = ScoreTrainer.from_checkpoint(resume_from, train_cfg)
    else:
        trainer = ScoreTrainer(pgsn_cfg, train_cfg, sched)
    return trainer.fit(split, out_dir)
