"""
그래프 집합의 edge-list 텍스트 직렬화

Format: one block per graph, blank-line separated::

    graph <id> <n>
    i j
    ...
"""

from collections.abc import Iterable
from pathlib import Path

import numpy as np

from utils.errors import DatasetFormatError
from utils.logger import logger_instance
from utils.serializer import dump_json

from .model import GraphSample

logger = logger_instance()


class GraphRepository:
    """Reads and writes graph sets in the edge-list text format with line-level diagnostics."""

    @classmethod
    def format_graphs(cls, graphs: Iterable[GraphSample]) -> str:
        blocks: list[str] = []
        for graph in graphs:
            lines = [f"graph {graph.graph_id} {graph.n}"]
            lines.extend(f"{i} {j}" for i, j in graph.edges())
            blocks.append("\n".join(lines) + "\n")
        return "\n".join(blocks)

    @classmethod
    def write(cls, graphs: Iterable[GraphSample], path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        graphs = list(graphs)
        path.write_text(cls.format_graphs(graphs), encoding="utf-8")
        logger.info(f"Wrote {len(graphs)} graphs to {path}")
        return path

    @classmethod
    def _parse_header(cls, fields: list[str], line_no: int) -> tuple[int, int]:
        if len(fields) != 3 or fields[0] != "graph":
            raise DatasetFormatError(f"expected 'graph <id> <n>', got {' '.join(fields)!r}", line_no)
        try:
            graph_id, n = int(fields[1]), int(fields[2])
        except ValueError:
            raise DatasetFormatError("graph id and node count must be integers", line_no) from None
        if graph_id < 0 or n < 1:
            raise DatasetFormatError(f"invalid header values id={graph_id} n={n}", line_no)
        return graph_id, n

    @classmethod
    def parse(cls, text: str, strict: bool = False) -> list[GraphSample]:
        """Parse the edge-list format.

        Args:
            text: file contents
            strict: reject duplicate edges instead of collapsing them

        Returns:
            list[GraphSample]: validated graphs in file order
        """
        graphs: list[GraphSample] = []
        current: tuple[int, int, np.ndarray] | None = None

        def close_block() -> None:
            if current is not None:
                graph_id, _, adjacency = current
                graphs.append(GraphSample(graph_id=graph_id, adjacency=adjacency))

        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if fields[0] == "graph":
                close_block()
                graph_id, n = cls._parse_header(fields, line_no)
                current = (graph_id, n, np.zeros((n, n), dtype=np.uint8))
                continue

            if current is None:
                raise DatasetFormatError("edge line before any 'graph' header", line_no)
            if len(fields) != 2:
                raise DatasetFormatError(f"expected 'i j', got {line!r}", line_no)
            try:
                i, j = int(fields[0]), int(fields[1])
            except ValueError:
                raise DatasetFormatError(f"node indices must be integers, got {line!r}", line_no) from None

            _, n, adjacency = current
            if not (0 <= i < n and 0 <= j < n):
                raise DatasetFormatError(f"edge ({i}, {j}) out of range for n={n}", line_no)
            if i == j:
                raise DatasetFormatError(f"self-loop on node {i}", line_no)
            if adjacency[i, j]:
                if strict:
                    raise DatasetFormatError(f"duplicate edge ({i}, {j})", line_no)
                logger.warning(f"line {line_no}: duplicate edge ({i}, {j}) collapsed")
            adjacency[i, j] = adjacency[j, i] = 1

        close_block()
        return graphs

    @classmethod
    def read(cls, path: str | Path, strict: bool = False) -> list[GraphSample]:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Edge list file not found: {path}")
        graphs = cls.parse(path.read_text(encoding="utf-8"), strict=strict)
        logger.info(f"Loaded {len(graphs)} graphs from {path}")
        return graphs


def load_edge_lists(path: str | Path, strict: bool = False) -> list[GraphSample]:
    return GraphRepository.read(path, strict=strict)


def save_edge_lists(graphs: Iterable[GraphSample], path: str | Path) -> Path:
    return GraphRepository.write(graphs, path)


def dataset_manifest(graphs: list[GraphSample], **params: object) -> dict[str, object]:
    node_counts = [graph.n for graph in graphs]
    histogram: dict[str, int] = {}
    for n in node_counts:
        histogram[str(n)] = histogram.get(str(n), 0) + 1
    return {
        "count": len(graphs),
        "node_count": {
            "min": min(node_counts, default=0),
            "max": max(node_counts, default=0),
            "mean": float(np.mean(node_counts)) if node_counts else 0.0,
            "histogram": histogram,
        },
        "total_edges": sum(graph.num_edges for graph in graphs),
        "params": params,
    }


def write_manifest(graphs: list[GraphSample], path: str | Path, **params: object) -> Path:
    path = Path(path)
    dump_json(dataset_manifest(graphs, **params), path)
    return path
