import networkx as nx
import numpy as np
import pytest
import torch
from pydantic import ValidationError

from graph_data import (
    GraphRepository,
    GraphSample,
    NodeCountDistribution,
    dataset_manifest,
    gen_community_small,
    gen_er,
    load_edge_lists,
    load_split,
    make_split,
    pad_graphs,
    save_edge_lists,
    save_split,
    unpad_graphs,
)
from graph_data.generators import CommunityGraphGenerator
from utils.errors import DatasetFormatError


def test_graph_sample_rejects_invalid_adjacency():
    with pytest.raises(ValidationError):
        GraphSample(adjacency=np.array([[1, 0], [0, 0]]))
    with pytest.raises(ValidationError):
        GraphSample(adjacency=np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValidationError):
        GraphSample(adjacency=np.array([[0, 2], [2, 0]]))
    with pytest.raises(ValidationError):
        GraphSample(adjacency=np.zeros((2, 3)))


def test_graph_sample_edges_and_networkx_bridge():
    graph = GraphSample.from_edges(4, [(0, 1), (2, 1), (3, 0)], graph_id=3)
    assert graph.n == 4
    assert graph.num_edges == 3
    assert graph.edges() == [(0, 1), (0, 3), (1, 2)]
    assert GraphSample.from_networkx(graph.to_networkx(), graph_id=3) == graph


def test_community_small_sizes(rng):
    graphs = gen_community_small(100, rng)
    assert len(graphs) == 100
    assert all(12 <= graph.n <= 20 and graph.n % 2 == 0 for graph in graphs)


def test_community_small_intra_density(rng):
    generator = CommunityGraphGenerator(p_intra=0.7, p_inter=0.05)
    graphs = generator.generate(2000, rng)
    intra_edges = intra_pairs = inter_edges = inter_pairs = 0
    for graph in graphs:
        half = graph.n // 2
        for block in (graph.adjacency[:half, :half], graph.adjacency[half:, half:]):
            intra_edges += int(np.triu(block, k=1).sum())
            intra_pairs += half * (half - 1) // 2
        inter_edges += int(graph.adjacency[:half, half:].sum())
        inter_pairs += half * half
    assert intra_edges / intra_pairs == pytest.approx(0.7, abs=0.01)
    assert inter_edges / inter_pairs == pytest.approx(0.05, abs=0.01)


def test_community_small_complete_halves(rng):
    graphs = CommunityGraphGenerator(p_intra=1.0, p_inter=0.0).generate(5, rng)
    for graph in graphs:
        half = graph.n // 2
        expected = nx.disjoint_union(nx.complete_graph(half), nx.complete_graph(half))
        assert np.array_equal(graph.adjacency, nx.to_numpy_array(expected, dtype=np.uint8))


def test_community_generator_rejects_odd_sizes():
    with pytest.raises(ValueError):
        CommunityGraphGenerator(sizes=[12, 13])


def test_er_extremes_and_density(rng):
    assert all(graph.num_edges == 0 for graph in gen_er(5, 6, 0.0, rng))
    assert all(graph.num_edges == 15 for graph in gen_er(5, 6, 1.0, rng))

    graphs = gen_er(100, 46, 0.3, rng)
    density = sum(graph.num_edges for graph in graphs) / (100 * 46 * 45 / 2)
    assert density == pytest.approx(0.3, abs=0.01)
    with pytest.raises(ValueError):
        gen_er(1, 4, 1.5, rng)


def test_er_draws_sizes_from_pmf(rng):
    dist = NodeCountDistribution(support=[3, 9], pmf=[0.5, 0.5])
    sizes = {graph.n for graph in gen_er(50, dist, 0.5, rng)}
    assert sizes == {3, 9}


def test_edge_list_round_trip(tmp_path, rng):
    graphs = gen_community_small(10, rng)
    path = save_edge_lists(graphs, tmp_path / "graphs.txt")
    assert load_edge_lists(path) == graphs


def test_edge_list_rejects_self_loop_with_line_number():
    text = "graph 0 3\n0 1\n2 2\n"
    with pytest.raises(DatasetFormatError) as excinfo:
        GraphRepository.parse(text)
    assert excinfo.value.line == 3


@pytest.mark.parametrize(
    ("text", "line"),
    [
        ("0 1\n", 1),
        ("graph 0 3\n0 5\n", 2),
        ("graph zero 3\n", 1),
        ("graph 0 3\n0 1 2\n", 2),
    ],
)
def test_edge_list_malformed_lines(text, line):
    with pytest.raises(DatasetFormatError) as excinfo:
        GraphRepository.parse(text)
    assert excinfo.value.line == line


def test_duplicate_edges_collapse_or_reject():
    text = "graph 0 3\n0 1\n1 0\n"
    graphs = GraphRepository.parse(text)
    assert graphs[0].num_edges == 1
    with pytest.raises(DatasetFormatError):
        GraphRepository.parse(text, strict=True)


def test_missing_edge_list_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_edge_lists(tmp_path / "absent.txt")


def test_split_ratios_and_determinism(rng):
    graphs = gen_community_small(100, rng)
    split = make_split(graphs, seed=7)
    assert (len(split.train), len(split.test), len(split.val)) == (80, 20, 16)
    assert split.val == split.train[:16]
    assert sum(split.node_count_pmf.pmf) == pytest.approx(1.0, abs=1e-12)

    ids = sorted(graph.graph_id for graph in split.train + split.test)
    assert ids == list(range(100))
    assert make_split(graphs, seed=7) == split


def test_split_needs_enough_graphs(rng):
    with pytest.raises(ValueError):
        make_split(gen_community_small(4, rng), seed=0)


def test_split_persistence(tmp_path, rng):
    split = make_split(gen_community_small(20, rng), seed=1)
    save_split(split, tmp_path, seed=1)
    assert load_split(tmp_path) == split


def test_node_count_distribution_validation():
    with pytest.raises(ValidationError):
        NodeCountDistribution(support=[1, 2], pmf=[0.5, 0.6])
    with pytest.raises(ValidationError):
        NodeCountDistribution(support=[1, 2], pmf=[1.2, -0.2])
    dist = NodeCountDistribution.from_counts([3, 3, 5, 7, 7, 7])
    assert dist.support == [3, 5, 7]
    assert sum(dist.pmf) == pytest.approx(1.0, abs=1e-12)


def test_manifest_matches_graphs(rng):
    graphs = gen_community_small(30, rng)
    manifest = dataset_manifest(graphs, seed=1)
    assert manifest["count"] == 30
    assert manifest["node_count"]["min"] == min(graph.n for graph in graphs)
    assert sum(manifest["node_count"]["histogram"].values()) == 30
    assert manifest["total_edges"] == sum(graph.num_edges for graph in graphs)


def test_padding_to_signed_scale():
    graphs = [GraphSample.from_edges(2, [(0, 1)]), GraphSample.from_edges(3, [(1, 2)], graph_id=1)]
    batch = pad_graphs(graphs, dtype=torch.float64)
    assert batch.adjacency.shape == (2, 3, 3)
    assert batch.node_mask.tolist() == [[True, True, False], [True, True, True]]
    assert batch.adjacency[0, 0, 1] == 1 and batch.adjacency[0, 0, 2] == -1
    assert torch.all(batch.adjacency.diagonal(dim1=-2, dim2=-1) == 0)

    restored = unpad_graphs((batch.adjacency > 0).to(torch.float64), batch.node_mask)
    assert restored == graphs
    with pytest.raises(ValueError):
        pad_graphs([])
