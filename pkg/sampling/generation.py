"""
배치 단위 그래프 생성 + 샘플링 메타데이터 기록
"""

import time
from collections.abc import Callable
from pathlib import Path

import torch
from uuid_utils import uuid7

from graph_data.batching import unpad_graphs
from graph_data.edge_list import save_edge_lists
from graph_data.model import GraphSample, NodeCountDistribution
from sde.model import VpSdeSchedule
from utils.logger import logger_instance
from utils.serializer import dump_json

from .model import BatchRecord, SampleManifest, SamplerConfig, SamplerMethod
from .ode_samplers import ode_sample_adaptive, ode_sample_fixed
from .score_fn import ScoreFn
from .sde_samplers import SamplerOutput, em_sample, node_mask_from_counts, pc_sample, sample_node_count

logger = logger_instance()

SAMPLES_NAME = "samples.txt"
SAMPLE_MANIFEST_NAME = "sample_manifest.json"

_Runner = Callable[[ScoreFn, torch.Tensor, SamplerConfig, VpSdeSchedule, torch.Generator, torch.dtype], SamplerOutput]

_RUNNERS: dict[SamplerMethod, _Runner] = {
    "em": em_sample,
    "pc": pc_sample,
    "ode_fixed": lambda score_fn, mask, cfg, sched, gen, dtype: ode_sample_fixed(
        score_fn, mask, cfg.ode_step_size, sched, gen, order=cfg.ode_order, t_end=cfg.t_end, dtype=dtype
    ),
    "ode_adaptive": lambda score_fn, mask, cfg, sched, gen, dtype: ode_sample_adaptive(
        score_fn, mask, cfg.ode_error_tol, sched, gen, t_end=cfg.t_end, min_step=cfg.ode_min_step, dtype=dtype
    ),
}


def run_sampler(
    score_fn: ScoreFn,
    node_mask: torch.Tensor,
    cfg: SamplerConfig,
    sched: VpSdeSchedule,
    generator: torch.Generator | None = None,
    dtype: torch.dtype = torch.float32,
) -> SamplerOutput:
    return _RUNNERS[cfg.method](score_fn, node_mask, cfg, sched, generator, dtype)


def generate_graphs(
    score_fn: ScoreFn,
    dist: NodeCountDistribution,
    cfg: SamplerConfig,
    sched: VpSdeSchedule,
    dtype: torch.dtype = torch.float32,
    device: torch.device | str = "cpu",
) -> tuple[list[GraphSample], SampleManifest]:
    """Generate ``cfg.count`` graphs in batches of ``cfg.batch_size``.

    Node counts are drawn from the training distribution and each batch is
    padded to its own largest graph.
    """
    generator = torch.Generator(device=device).manual_seed(cfg.seed)
    graphs: list[GraphSample] = []
    records: list[BatchRecord] = []
    started = time.perf_counter()

    for batch_index, offset in enumerate(range(0, cfg.count, cfg.batch_size)):
        size = min(cfg.batch_size, cfg.count - offset)
        node_counts = sample_node_count(dist, generator, size)
        node_mask = node_mask_from_counts(node_counts, device=device)

        batch_started = time.perf_counter()
        output = run_sampler(score_fn, node_mask, cfg, sched, generator, dtype)
        wall_time = time.perf_counter() - batch_started

        batch_graphs = unpad_graphs(output.A_bar, node_mask, start_id=offset)
        graphs.extend(batch_graphs)
        records.append(
            BatchRecord(
                batch_index=batch_index,
                graph_ids=[graph.graph_id for graph in batch_graphs],
                node_counts=node_counts,
                nfe=output.nfe,
                wall_time=wall_time,
                wall_time_per_graph=wall_time / size,
            )
        )
        logger.info(f"Batch {batch_index}: {size} graphs, nfe={output.nfe}, {wall_time:.2f}s")

    manifest = SampleManifest(
        run_id=str(uuid7()),
        method=cfg.method,
        seed=cfg.seed,
        count=cfg.count,
        batch_size=cfg.batch_size,
        nfe=max((record.nfe for record in records), default=0),
        total_nfe=sum(record.nfe for record in records),
        total_wall_time=time.perf_counter() - started,
        sampler=cfg.model_dump(),
        batches=records,
    )
    return graphs, manifest


def write_samples(graphs: list[GraphSample], manifest: SampleManifest, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_edge_lists(graphs, out_dir / SAMPLES_NAME)
    dump_json(manifest.model_dump(), out_dir / SAMPLE_MANIFEST_NAME)
    return out_dir
