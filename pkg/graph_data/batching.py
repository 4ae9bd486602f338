import torch

from .model import GraphBatch, GraphSample


def pad_graphs(
    graphs: list[GraphSample],
    dtype: torch.dtype = torch.float32,
    device: torch.device | str | None = None,
) -> GraphBatch:
    """Pad to the largest graph of this batch; edges map to +1, non-edges to -1."""
    if not graphs:
        raise ValueError("cannot pad an empty batch")
    size = max(graph.n for graph in graphs)
    adjacency = torch.full((len(graphs), size, size), -1.0, dtype=dtype)
    node_mask = torch.zeros((len(graphs), size), dtype=torch.bool)
    for index, graph in enumerate(graphs):
        n = graph.n
        adjacency[index, :n, :n] = 2.0 * torch.as_tensor(graph.adjacency, dtype=dtype) - 1.0
        node_mask[index, :n] = True
    adjacency.diagonal(dim1=-2, dim2=-1).zero_()
    return GraphBatch(adjacency=adjacency.to(device), node_mask=node_mask.to(device))


def unpad_graphs(adjacency: torch.Tensor, node_mask: torch.Tensor, start_id: int = 0) -> list[GraphSample]:
    """Binary padded adjacency back to GraphSample objects."""
    graphs: list[GraphSample] = []
    for index in range(adjacency.shape[0]):
        n = int(node_mask[index].sum())
        block = adjacency[index, :n, :n].detach().cpu().round().to(torch.uint8).numpy()
        graphs.append(GraphSample(graph_id=start_id + index, adjacency=block))
    return graphs
