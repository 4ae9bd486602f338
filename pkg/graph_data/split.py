from pathlib import Path

import numpy as np

from utils.errors import DomainError
from utils.logger import logger_instance
from utils.serializer import dump_json

from .edge_list import GraphRepository
from .model import DatasetSplit, GraphSample, NodeCountDistribution

logger = logger_instance()

TRAIN_FRACTION: float = 0.8
VAL_FRACTION: float = 0.2
MIN_GRAPHS: int = 5


def node_count_distribution(graphs: list[GraphSample]) -> NodeCountDistribution:
    return NodeCountDistribution.from_counts(graph.n for graph in graphs)


def make_split(graphs: list[GraphSample], seed: int) -> DatasetSplit:
    """Seeded shuffle, 8:2 train/test; validation is the first 20% of the training graphs."""
    if len(graphs) < MIN_GRAPHS:
        raise DomainError(f"need at least {MIN_GRAPHS} graphs to split, got {len(graphs)}")

    order = np.random.default_rng(seed).permutation(len(graphs))
    shuffled = [graphs[i] for i in order]
    n_train = int(len(graphs) * TRAIN_FRACTION)
    train, test = shuffled[:n_train], shuffled[n_train:]
    val = train[: max(1, int(len(train) * VAL_FRACTION))]

    logger.info(f"Split {len(graphs)} graphs into {len(train)} train / {len(test)} test / {len(val)} val")
    return DatasetSplit(train=train, val=val, test=test, node_count_pmf=node_count_distribution(train))


def save_split(split: DatasetSplit, directory: str | Path, seed: int) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in ("train", "val", "test"):
        GraphRepository.write(getattr(split, name), directory / f"{name}.txt")
    dump_json(
        {
            "seed": seed,
            "counts": {name: len(getattr(split, name)) for name in ("train", "val", "test")},
            "node_count_pmf": split.node_count_pmf.model_dump(),
        },
        directory / "split.json",
    )
    return directory


def load_split(directory: str | Path) -> DatasetSplit:
    directory = Path(directory)
    train = GraphRepository.read(directory / "train.txt")
    return DatasetSplit(
        train=train,
        val=GraphRepository.read(directory / "val.txt"),
        test=GraphRepository.read(directory / "test.txt"),
        node_count_pmf=node_count_distribution(train),
    )
