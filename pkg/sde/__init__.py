from .model import DiffusionState, PerturbKernelParams, VpSdeSchedule
from .vp_sde import (
    QUANTIZE_THRESHOLD,
    beta_at,
    integrated_beta,
    marginal_coeffs,
    pair_mask,
    perturb,
    prior_sample,
    quantize,
    reverse_drift,
    score_target,
    symmetric_noise,
)

__all__ = [
    "QUANTIZE_THRESHOLD",
    "DiffusionState",
    "PerturbKernelParams",
    "VpSdeSchedule",
    "beta_at",
    "integrated_beta",
    "marginal_coeffs",
    "pair_mask",
    "perturb",
    "prior_sample",
    "quantize",
    "reverse_drift",
    "score_target",
    "symmetric_noise",
]
