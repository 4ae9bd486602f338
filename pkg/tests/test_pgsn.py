import pytest
import torch
from pydantic import ValidationError

from pgsn import PgsnConfig, PositionAttentionLayer, PositionEnhancedScoreNetwork, masked_softmax, sinusoidal_embedding
from pgsn.layers import TimeEmbedding
from sde.model import DiffusionState
from sde.vp_sde import quantize, symmetric_noise
from utils.errors import NumericalError

from conftest import max_equivariance_error, randomize_head

f64 = torch.float64


def _network(cfg: PgsnConfig, seed: int = 0) -> PositionEnhancedScoreNetwork:
    torch.manual_seed(seed)
    return randomize_head(PositionEnhancedScoreNetwork(cfg).to(f64), seed)


def _inputs(batch: int, n: int, seed: int = 0, node_mask: torch.Tensor | None = None):
    gen = torch.Generator().manual_seed(seed)
    node_mask = node_mask if node_mask is not None else torch.ones(batch, n, dtype=torch.bool)
    A = symmetric_noise((batch, n, n), gen, node_mask, dtype=f64)
    t = torch.rand(batch, generator=gen, dtype=f64)
    return A, quantize(A, node_mask), t, node_mask


def _permute(x: torch.Tensor, perm: torch.Tensor) -> torch.Tensor:
    return x[:, perm][:, :, perm]


def test_config_requires_divisible_heads():
    with pytest.raises(ValidationError):
        PgsnConfig(hidden_dim=30, num_heads=8)


def test_time_embedding_shape_and_determinism():
    t = torch.tensor([0.0, 1.0], dtype=f64)
    assert sinusoidal_embedding(t, 17).shape == (2, 17)
    embed = TimeEmbedding(16).to(f64)
    first, second = embed(t), embed(t)
    assert first.shape == (2, 16)
    assert torch.equal(first, second)
    assert torch.linalg.vector_norm(first[0] - first[1]) > 0


def test_masked_softmax_empty_row_is_zero():
    logits = torch.randn(2, 3)
    mask = torch.tensor([[True, False, True], [False, False, False]])
    weights = masked_softmax(logits, mask, dim=-1)
    assert weights[0].sum().item() == pytest.approx(1.0)
    assert weights[0, 1] == 0
    assert torch.all(weights[1] == 0)


def test_single_edge_attention_weight_is_one(small_cfg):
    layer = PositionAttentionLayer(small_cfg).to(f64)
    d, r = small_cfg.hidden_dim, small_cfg.rw_steps
    h, p, e = torch.randn(1, 2, d, dtype=f64), torch.rand(1, 2, r, dtype=f64), torch.randn(1, 2, 2, d, dtype=f64)
    neighbours = torch.tensor([[[False, True], [True, False]]])
    attn = layer.attention_weights(h, p, e, neighbours)
    assert torch.allclose(attn[0, 0, 1], torch.ones(small_cfg.num_heads, dtype=f64))
    assert torch.all(attn[0, 0, 0] == 0)


def test_edge_update_keeps_symmetry(small_cfg):
    layer = PositionAttentionLayer(small_cfg).to(f64)
    n, d, r = 5, small_cfg.hidden_dim, small_cfg.rw_steps
    e = torch.randn(1, n, n, d, dtype=f64)
    e = e + e.transpose(1, 2)
    neighbours = ~torch.eye(n, dtype=torch.bool).unsqueeze(0)
    node_mask = torch.ones(1, n, dtype=torch.bool)
    temb = torch.randn(1, small_cfg.time_embed_dim, dtype=f64)
    h, p, e_new = layer(torch.randn(1, n, d, dtype=f64), torch.rand(1, n, r, dtype=f64), e, neighbours, node_mask, temb)
    assert torch.allclose(e_new, e_new.transpose(1, 2))
    assert h.shape == (1, n, d) and p.shape == (1, n, r)


def test_initial_score_is_zero(small_cfg):
    torch.manual_seed(0)
    model = PositionEnhancedScoreNetwork(small_cfg).to(f64)
    A, A_bar, t, node_mask = _inputs(2, 6)
    assert torch.all(model(A, A_bar, t, node_mask) == 0)


def test_output_is_symmetric_with_zero_diagonal(small_cfg):
    model = _network(small_cfg)
    A, A_bar, t, node_mask = _inputs(3, 7)
    score = model(A, A_bar, t, node_mask)
    assert score.shape == (3, 7, 7)
    assert torch.allclose(score, score.transpose(-1, -2))
    assert torch.all(score.diagonal(dim1=-2, dim2=-1) == 0)
    assert torch.isfinite(score).all()
    assert score.abs().sum() > 0


def test_empty_quantized_graph_features(small_cfg):
    model = _network(small_cfg)
    A = -torch.ones(1, 5, 5, dtype=f64)
    A.diagonal(dim1=-2, dim2=-1).zero_()
    node_mask = torch.ones(1, 5, dtype=torch.bool)
    h0, p0, e0, _, feats = model.init_features(A, quantize(A, node_mask), torch.tensor([0.5], dtype=f64), node_mask)
    assert torch.all(feats.degree_onehot.argmax(dim=-1) == 0)
    assert torch.all(feats.landing == 0)
    assert torch.allclose(h0, h0[:, :1].expand_as(h0))
    assert e0.shape == (1, 5, 5, small_cfg.hidden_dim)


@pytest.mark.parametrize(
    "overrides",
    [{}, {"use_position": False}, {"use_spd": False}, {"update_edges": False}],
)
def test_permutation_equivariance(small_cfg, overrides):
    model = _network(small_cfg.model_copy(update=overrides))
    n = 8
    A, A_bar, t, node_mask = _inputs(1, n, seed=3)
    score = model(A, A_bar, t, node_mask)
    gen = torch.Generator().manual_seed(11)
    for _ in range(20):
        perm = torch.randperm(n, generator=gen)
        permuted = model(_permute(A, perm), _permute(A_bar, perm), t, node_mask)
        assert torch.allclose(permuted, _permute(score, perm), atol=1e-8)


def test_permutation_equivariance_in_single_precision(small_cfg, sched):
    torch.manual_seed(0)
    model = PositionEnhancedScoreNetwork(small_cfg.model_copy(update={"max_nodes": 20}))
    randomize_head(model, seed=2)
    assert next(model.parameters()).dtype == torch.float32
    # 100 random graphs of up to 20 nodes, each with its own t and permutation
    assert max_equivariance_error(model, sched, triples=100, seed=5) <= 1e-4


def test_score_of_state_matches_forward(small_cfg):
    model = _network(small_cfg)
    A, A_bar, t, node_mask = _inputs(2, 6, seed=8)
    state = DiffusionState(A=A, A_bar=A_bar, t=t, node_mask=node_mask)
    assert torch.allclose(model.score(state), model(A, A_bar, t, node_mask), atol=1e-12)


def test_padding_does_not_change_real_scores(small_cfg):
    model = _network(small_cfg)
    A, A_bar, t, node_mask = _inputs(1, 6, seed=4)
    score = model(A, A_bar, t, node_mask)

    padded = -torch.ones(1, 9, 9, dtype=f64)
    padded[:, :6, :6] = A
    padded.diagonal(dim1=-2, dim2=-1).zero_()
    padded_mask = torch.tensor([[True] * 6 + [False] * 3])
    padded_score = model(padded, quantize(padded, padded_mask), t, padded_mask)
    assert torch.allclose(padded_score[:, :6, :6], score, atol=1e-10)
    assert torch.all(padded_score[:, 6:] == 0) and torch.all(padded_score[:, :, 6:] == 0)


def test_masked_nodes_receive_no_gradient(small_cfg):
    model = _network(small_cfg)
    node_mask = torch.tensor([[True] * 5 + [False] * 2])
    A, A_bar, t, _ = _inputs(1, 7, seed=5, node_mask=node_mask)
    A = A.clone().requires_grad_(True)
    model(A, A_bar, t, node_mask).pow(2).sum().backward()
    assert torch.all(A.grad[:, 5:] == 0)
    assert torch.all(A.grad[:, :, 5:] == 0)
    assert A.grad[:, :5, :5].abs().sum() > 0


def test_ablation_without_position_keeps_zero_stream(small_cfg):
    model = _network(small_cfg.model_copy(update={"use_position": False}))
    A, A_bar, t, node_mask = _inputs(1, 5)
    _, p0, _, _, _ = model.init_features(A, A_bar, t, node_mask)
    assert torch.all(p0 == 0)


def test_forward_is_deterministic(small_cfg):
    model = _network(small_cfg)
    A, A_bar, t, node_mask = _inputs(2, 6)
    assert torch.equal(model(A, A_bar, t, node_mask), model(A, A_bar, t, node_mask))


def test_non_finite_input_reports_stage(small_cfg):
    model = _network(small_cfg)
    A, A_bar, t, node_mask = _inputs(1, 4)
    A[0, 0, 1] = A[0, 1, 0] = float("nan")
    with pytest.raises(NumericalError) as excinfo:
        model(A, A_bar, t, node_mask)
    assert excinfo.value.diagnostics["stage"] == "init_features"


def test_parameter_count_is_positive(small_cfg):
    assert PositionEnhancedScoreNetwork(small_cfg).num_parameters() > 0
