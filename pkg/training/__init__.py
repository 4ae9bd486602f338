from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .ema import ExponentialMovingAverage
from .losses import dsm_loss, dsm_objective, lower_pair_mask, sample_training_inputs
from .model import StepResult, TrainConfig
from .trainer import CHECKPOINT_NAME, TRAIN_LOG_NAME, ScoreTrainer, fit

__all__ = [
    "CHECKPOINT_NAME",
    "TRAIN_LOG_NAME",
    "Checkpoint",
    "ExponentialMovingAverage",
    "ScoreTrainer",
    "StepResult",
    "TrainConfig",
    "dsm_loss",
    "dsm_objective",
    "fit",
    "load_checkpoint",
    "lower_pair_mask",
    "sample_training_inputs",
    "save_checkpoint",
]
