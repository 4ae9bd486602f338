from graph_data.model import NodeCountDistribution

from .generation import SAMPLE_MANIFEST_NAME, SAMPLES_NAME, generate_graphs, run_sampler, write_samples
from .model import BatchRecord, SampleManifest, SamplerConfig, SamplerMethod
from .ode_samplers import ProbabilityFlow, ode_rhs, ode_sample_adaptive, ode_sample_fixed
from .score_fn import CountingScoreFn, ScoreFn, model_score_fn, time_vector
from .sde_samplers import (
    SamplerOutput,
    em_sample,
    em_step,
    langevin_correct,
    node_mask_from_counts,
    pc_sample,
    reverse_sde_sample,
    sample_node_count,
)

__all__ = [
    "BatchRecord",
    "CountingScoreFn",
    "NodeCountDistribution",
    "ProbabilityFlow",
    "SAMPLES_NAME",
    "SAMPLE_MANIFEST_NAME",
    "SampleManifest",
    "SamplerConfig",
    "SamplerMethod",
    "SamplerOutput",
    "ScoreFn",
    "em_sample",
    "em_step",
    "generate_graphs",
    "langevin_correct",
    "model_score_fn",
    "node_mask_from_counts",
    "ode_rhs",
    "ode_sample_adaptive",
    "ode_sample_fixed",
    "pc_sample",
    "reverse_sde_sample",
    "run_sampler",
    "sample_node_count",
    "time_vector",
]
