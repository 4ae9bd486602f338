"""
그래프 구조 기술자 히스토그램: degree / clustering coefficient / normalized Laplacian spectrum
"""

import networkx as nx
import numpy as np

from graph_data.model import GraphSample

from .model import DescriptorHistogram, DescriptorKind

CLUSTERING_BINS: int = 100
SPECTRUM_BINS: int = 200
SPECTRUM_RANGE: tuple[float, float] = (0.0, 2.0)


def _normalize(counts: np.ndarray) -> np.ndarray:
    counts = counts.astype(np.float64)
    total = counts.sum()
    return counts / total if total > 0 else counts


def degree_descriptor(graph: GraphSample, max_degree: int | None = None) -> DescriptorHistogram:
    """Degree pmf over integer bins 0..max_degree (defaults to n - 1)."""
    bound = graph.n - 1 if max_degree is None else max_degree
    degrees = graph.adjacency.sum(axis=1).astype(np.int64)
    if degrees.size and degrees.max() > bound:
        raise ValueError(f"max_degree {bound} is below the observed degree {degrees.max()}")
    counts = np.bincount(degrees, minlength=max(bound, 0) + 1)
    return DescriptorHistogram(kind="degree", values=_normalize(counts))


def clustering_descriptor(graph: GraphSample) -> DescriptorHistogram:
    # networkx reports 0 for nodes of degree < 2
    coefficients = list(nx.clustering(graph.to_networkx()).values())
    counts, _ = np.histogram(coefficients, bins=CLUSTERING_BINS, range=(0.0, 1.0))
    return DescriptorHistogram(kind="clustering", values=_normalize(counts))


def laplacian_spectrum(graph: GraphSample) -> np.ndarray:
    """Eigenvalues of I - D^-1/2 A D^-1/2 with D^-1/2 = 0 on isolated nodes."""
    laplacian = nx.normalized_laplacian_matrix(graph.to_networkx(), nodelist=list(range(graph.n))).toarray()
    return np.linalg.eigvalsh(laplacian)


def spectrum_descriptor(graph: GraphSample) -> DescriptorHistogram:
    eigenvalues = np.clip(laplacian_spectrum(graph), *SPECTRUM_RANGE)
    counts, _ = np.histogram(eigenvalues, bins=SPECTRUM_BINS, range=SPECTRUM_RANGE)
    return DescriptorHistogram(kind="spectrum", values=_normalize(counts))


def max_degree_bound(*graph_sets: list[GraphSample]) -> int:
    """Largest degree observed across every set being compared."""
    degrees = [int(graph.adjacency.sum(axis=1).max(initial=0)) for graphs in graph_sets for graph in graphs]
    return max(degrees, default=0)


def describe(graphs: list[GraphSample], kind: DescriptorKind, max_degree: int | None = None) -> np.ndarray:
    """Stack one descriptor over a graph set into an (m, bins) matrix."""
    if kind == "degree":
        histograms = [degree_descriptor(graph, max_degree) for graph in graphs]
    elif kind == "clustering":
        histograms = [clustering_descriptor(graph) for graph in graphs]
    elif kind == "spectrum":
        histograms = [spectrum_descriptor(graph) for graph in graphs]
    else:
        raise ValueError(f"unknown descriptor kind: {kind}")

    width = max((histogram.bins for histogram in histograms), default=0)
    stacked = np.zeros((len(histograms), width))
    for row, histogram in enumerate(histograms):
        stacked[row, : histogram.bins] = histogram.values
    return stacked
