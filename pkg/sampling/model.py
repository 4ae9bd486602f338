from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field

SamplerMethod = Literal["em", "pc", "ode_fixed", "ode_adaptive"]


class SamplerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    method: Annotated[SamplerMethod, Field(description="Reverse-time integrator")] = "pc"
    num_steps: Annotated[int, Field(ge=1, description="EM / PC discretization steps")] = 1000
    corrector_steps_per_iter: Annotated[int, Field(ge=0, description="Langevin steps after each predictor step")] = 1
    snr_r: Annotated[float, Field(gt=0, description="Corrector signal-to-noise coefficient r")] = 0.16
    ode_step_size: Annotated[float, Field(gt=0, le=1, description="Fixed ODE step")] = 0.18
    ode_order: Annotated[Literal["euler", "midpoint", "rk4"], Field(description="Fixed-step solver")] = "rk4"
    ode_error_tol: Annotated[float, Field(gt=0, description="Adaptive solver rtol = atol")] = 1e-2
    ode_min_step: Annotated[float, Field(gt=0, description="Adaptive step-size underflow bound")] = 1e-6
    t_end: Annotated[float, Field(ge=0, lt=1, description="Integration stops here instead of t = 0")] = 1e-5
    batch_size: Annotated[int, Field(gt=0, description="Graphs generated per batch")] = 16
    count: Annotated[int, Field(gt=0, description="Graphs to generate")] = 1024
    seed: int = 0


class BatchRecord(BaseModel):
    batch_index: int
    graph_ids: list[int]
    node_counts: list[int]
    nfe: int
    wall_time: float
    wall_time_per_graph: float


class SampleManifest(BaseModel):
    run_id: str
    method: SamplerMethod
    seed: int
    count: int
    batch_size: int
    nfe: Annotated[int, Field(description="Score evaluations per trajectory (largest batch for adaptive solvers)")]
    total_nfe: Annotated[int, Field(description="Score evaluations summed over all batches")]
    total_wall_time: float
    sampler: dict[str, Any]
    batches: list[BatchRecord]
