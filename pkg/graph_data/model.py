from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Annotated, Any, Self

import networkx as nx
import numpy as np
import torch
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class GraphSample(BaseModel):
    """Simple undirected graph: binary symmetric adjacency with zero diagonal."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    graph_id: Annotated[int, Field(ge=0, description="Position of the graph in its dataset")] = 0
    adjacency: Annotated[np.ndarray, Field(description="n x n 0/1 adjacency matrix")]

    @field_validator("adjacency", mode="before")
    @classmethod
    def validate_simple_graph(cls, value: Any) -> np.ndarray:
        """self-loop, 비대칭, 0/1 이외의 값은 허용하지 않음"""
        adjacency = np.asarray(value)
        if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adjacency.shape}")
        if not np.isin(adjacency, (0, 1)).all():
            raise ValueError("adjacency must be binary (multi-edges are not allowed)")
        if np.any(np.diag(adjacency) != 0):
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adjacency, adjacency.T):
            raise ValueError("adjacency must be symmetric (undirected graph)")
        return adjacency.astype(np.uint8)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphSample):
            return NotImplemented
        return self.graph_id == other.graph_id and np.array_equal(self.adjacency, other.adjacency)

    @property
    def n(self) -> int:
        return int(self.adjacency.shape[0])

    @property
    def num_edges(self) -> int:
        return int(np.triu(self.adjacency, k=1).sum())

    def edges(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
        return [(int(i), int(j)) for i, j in zip(rows, cols)]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], graph_id: int = 0) -> Self:
        adjacency = np.zeros((n, n), dtype=np.uint8)
        for i, j in edges:
            adjacency[i, j] = adjacency[j, i] = 1
        return cls(graph_id=graph_id, adjacency=adjacency)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph, graph_id: int = 0) -> Self:
        return cls(graph_id=graph_id, adjacency=nx.to_numpy_array(graph, nodelist=sorted(graph.nodes), dtype=np.uint8))


class NodeCountDistribution(BaseModel):
    """Empirical pmf of node counts (sampling-time node count draws)."""

    support: Annotated[list[int], Field(description="Observed node counts")]
    pmf: Annotated[list[float], Field(description="Probability of each support entry")]

    @model_validator(mode="after")
    def check_pmf(self) -> Self:
        if len(self.support) != len(self.pmf):
            raise ValueError("support and pmf must have the same length")
        if any(prob < 0 for prob in self.pmf):
            raise ValueError("pmf must be nonnegative")
        if self.support and abs(sum(self.pmf) - 1.0) > 1e-12:
            raise ValueError(f"pmf must sum to 1, got {sum(self.pmf)}")
        return self

    @classmethod
    def from_counts(cls, node_counts: Iterable[int]) -> Self:
        counter = Counter(int(n) for n in node_counts)
        support = sorted(counter)
        total = sum(counter.values())
        pmf = [counter[n] / total for n in support]
        # absorb rounding so the pmf sums to 1 within 1e-12
        if pmf:
            pmf[-1] = 1.0 - sum(pmf[:-1])
        return cls(support=support, pmf=pmf)


class DatasetSplit(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    train: list[GraphSample]
    val: list[GraphSample]
    test: list[GraphSample]
    node_count_pmf: NodeCountDistribution


@dataclass(frozen=True)
class GraphBatch:
    """Graphs padded to the batch maximum n, signed scale (edge +1, non-edge -1, diagonal 0)."""

    adjacency: torch.Tensor
    node_mask: torch.Tensor

    @property
    def size(self) -> int:
        return int(self.adjacency.shape[0])
