"""
gen-data / train / sample / eval 서브커맨드
"""

import argparse
from pathlib import Path
from typing import Any

import numpy as np
import torch

from evaluation import evaluate, sample_er_baseline, write_report
from graph_data import (
    GraphRepository,
    gen_community_small,
    gen_er,
    load_edge_lists,
    load_split,
    make_split,
    save_edge_lists,
    save_split,
    write_manifest,
)
from graph_data.model import GraphSample
from sampling import SAMPLES_NAME, generate_graphs, model_score_fn, write_samples
from training import CHECKPOINT_NAME, ScoreTrainer, load_checkpoint
from utils.config_loader import get_config
from utils.logger import logger_instance

from .run_config import RunConfig, derive_seed, save_run_config

logger = logger_instance()

DATA_DIR = "data"
SPLIT_DIR = "split"
TRAIN_DIR = "train"
SAMPLES_DIR = "samples"
EVAL_DIR = "eval"
DATASET_NAME = "dataset.txt"
DATASET_MANIFEST_NAME = "manifest.json"
CONFIG_ECHO_NAME = "config.toml"


def runtime_dtype() -> torch.dtype:
    name = get_config("runtime", "dtype", "float32")
    dtype = getattr(torch, name, None)
    if not isinstance(dtype, torch.dtype):
        raise ValueError(f"unknown runtime dtype {name!r}")
    return dtype


def flag_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Dedicated command flags as dotted config overrides (unset flags are skipped)."""
    mapping = {
        "seed": "seed",
        "output_dir": "output_dir",
        "dataset": "dataset.name",
        "count": "dataset.count" if args.command == "gen-data" else "sampler.count",
        "path": "dataset.path",
        "steps": "train.total_steps",
        "device": "train.device",
        "method": "sampler.method",
        "step_size": "sampler.ode_step_size",
        "batch_size": "sampler.batch_size",
    }
    return {key: getattr(args, flag) for flag, key in mapping.items() if getattr(args, flag, None) is not None}


def cmd_gen_data(config: RunConfig, args: argparse.Namespace) -> Path:
    """Generate or ingest a dataset, then write it with its manifest and the train/val/test split."""
    dataset = config.dataset
    rng = np.random.default_rng(dataset.seed)
    params: dict[str, Any] = {"name": dataset.name, "seed": dataset.seed}

    if dataset.name == "community_small":
        graphs = gen_community_small(dataset.count, rng)
    elif dataset.name == "er":
        graphs = gen_er(dataset.count, dataset.er_nodes, dataset.er_p, rng)
        params |= {"n": dataset.er_nodes, "p": dataset.er_p}
    else:
        graphs = load_edge_lists(dataset.path, strict=dataset.strict)
        params["source"] = dataset.path

    data_dir = config.out / DATA_DIR
    save_edge_lists(graphs, data_dir / DATASET_NAME)
    write_manifest(graphs, data_dir / DATASET_MANIFEST_NAME, **params)
    split_seed = derive_seed(dataset.seed, "data")
    save_split(make_split(graphs, split_seed), data_dir / SPLIT_DIR, split_seed)
    return data_dir


def _checkpoint_path(config: RunConfig, args: argparse.Namespace) -> Path:
    return Path(args.checkpoint) if getattr(args, "checkpoint", None) else config.out / TRAIN_DIR / CHECKPOINT_NAME


def cmd_train(config: RunConfig, args: argparse.Namespace) -> Path:
    split = load_split(config.out / DATA_DIR / SPLIT_DIR)
    largest = max(graph.n for graph in split.train)
    if largest > config.model.max_nodes:
        logger.warning(f"Training graphs reach {largest} nodes but model.max_nodes={config.model.max_nodes}; degrees are clamped")

    train_dir = config.out / TRAIN_DIR
    save_run_config(config, train_dir / CONFIG_ECHO_NAME)
    checkpoint_path = _checkpoint_path(config, args)
    if args.resume and checkpoint_path.exists():
        trainer = ScoreTrainer.from_checkpoint(checkpoint_path, config.train, dtype=runtime_dtype())
    else:
        if args.resume:
            logger.warning(f"No checkpoint at {checkpoint_path}; starting from scratch")
        trainer = ScoreTrainer(config.model, config.train, config.schedule, dtype=runtime_dtype())
    return trainer.fit(split, train_dir)


def cmd_sample(config: RunConfig, args: argparse.Namespace) -> Path:
    checkpoint = load_checkpoint(_checkpoint_path(config, args))
    split = load_split(config.out / DATA_DIR / SPLIT_DIR)
    model = checkpoint.build_model(use_ema=True, device=config.train.device).to(dtype=runtime_dtype())

    graphs, manifest = generate_graphs(
        model_score_fn(model),
        split.node_count_pmf,
        config.sampler,
        checkpoint.schedule,
        dtype=runtime_dtype(),
        device=config.train.device,
    )
    out_dir = write_samples(graphs, manifest, config.out / SAMPLES_DIR)
    logger.info(f"Sampled {len(graphs)} graphs with {manifest.method}: nfe={manifest.nfe} per trajectory ({manifest.total_nfe} total), {manifest.total_wall_time:.1f}s")
    return out_dir


def cmd_eval(config: RunConfig, args: argparse.Namespace) -> Path:
    split = load_split(config.out / DATA_DIR / SPLIT_DIR)
    samples_path = Path(args.samples) if args.samples else config.out / SAMPLES_DIR / SAMPLES_NAME
    generated: list[GraphSample] = GraphRepository.read(samples_path)

    baseline = None
    if args.baseline == "er":
        rng = np.random.default_rng(derive_seed(config.seed, "eval"))
        baseline = sample_er_baseline(split.train, len(generated), rng)

    report = evaluate(generated, split.test, split.train, baseline=baseline)
    table_path, _ = write_report(report, config.out / EVAL_DIR)
    return table_path


COMMANDS = {
    "gen-data": cmd_gen_data,
    "train": cmd_train,
    "sample": cmd_sample,
    "eval": cmd_eval,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphdiff", description="Score-based graph generation")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="flat TOML run config")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE", help="config override, repeatable, applied last")
    common.add_argument("--output-dir", type=str, default=None, help="run directory")
    common.add_argument("--seed", type=int, default=None, help="global seed")

    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", parents=[common], help="generate or ingest a dataset")
    gen.add_argument("--dataset", choices=["community_small", "er", "edge_list"], default=None)
    gen.add_argument("--count", type=int, default=None, help="graphs to generate")
    gen.add_argument("--path", type=str, default=None, help="edge-list file to ingest")

    train = sub.add_parser("train", parents=[common], help="train the score network")
    train.add_argument("--steps", type=int, default=None, help="total optimizer steps")
    train.add_argument("--resume", action="store_true", help="continue from the run checkpoint")
    train.add_argument("--checkpoint", type=str, default=None)
    train.add_argument("--device", type=str, default=None)

    sample = sub.add_parser("sample", parents=[common], help="generate graphs from a checkpoint")
    sample.add_argument("--method", choices=["em", "pc", "ode_fixed", "ode_adaptive"], default=None)
    sample.add_argument("--step-size", type=float, default=None, help="fixed ODE step size")
    sample.add_argument("--count", type=int, default=None, help="graphs to generate")
    sample.add_argument("--batch-size", type=int, default=None)
    sample.add_argument("--checkpoint", type=str, default=None)

    ev = sub.add_parser("eval", parents=[common], help="MMD report for generated graphs")
    ev.add_argument("--samples", type=str, default=None, help="edge-list file of generated graphs")
    ev.add_argument("--baseline", choices=["er"], default=None)
    return parser
