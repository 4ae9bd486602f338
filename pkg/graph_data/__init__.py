from .batching import pad_graphs, unpad_graphs
from .edge_list import GraphRepository, dataset_manifest, load_edge_lists, save_edge_lists, write_manifest
from .generators import CommunityGraphGenerator, gen_community_small, gen_er
from .model import DatasetSplit, GraphBatch, GraphSample, NodeCountDistribution
from .split import load_split, make_split, node_count_distribution, save_split

__all__ = [
    "CommunityGraphGenerator",
    "DatasetSplit",
    "GraphBatch",
    "GraphRepository",
    "GraphSample",
    "NodeCountDistribution",
    "dataset_manifest",
    "gen_community_small",
    "gen_er",
    "load_edge_lists",
    "load_split",
    "make_split",
    "node_count_distribution",
    "pad_graphs",
    "save_edge_lists",
    "save_split",
    "unpad_graphs",
    "write_manifest",
]
