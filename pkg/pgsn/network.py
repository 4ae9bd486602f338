"""
Position-enhanced graph score network s_theta(A_t, A_bar_t, t)
"""

import torch
import torch.nn as nn

from graph_features import GraphFeatures, extract_features
from sde.model import DiffusionState
from sde.vp_sde import pair_mask
from utils.errors import NumericalError

from .layers import PositionAttentionLayer, TimeEmbedding
from .model import PgsnConfig


def _check_finite(stage: str, *tensors: torch.Tensor) -> None:
    for tensor in tensors:
        if not bool(torch.isfinite(tensor).all()):
            raise NumericalError("non-finite activations in score network", stage=stage)


class PositionEnhancedScoreNetwork(nn.Module):
    def __init__(self, cfg: PgsnConfig) -> None:
        super().__init__()
        self.cfg = cfg
        d, r = cfg.hidden_dim, cfg.rw_steps
        adj_dim = d // 2

        self.time_embed = TimeEmbedding(cfg.time_embed_dim)
        self.h_time = nn.Linear(cfg.time_embed_dim, d)
        self.p_time = nn.Linear(cfg.time_embed_dim, r)
        self.e_time = nn.Linear(cfg.time_embed_dim, d)

        self.degree_embed = nn.Linear(cfg.max_degree + 1, d)
        self.position_embed = nn.Linear(r, r)
        self.adj_embed = nn.Linear(1, adj_dim)
        self.spd_embed = nn.Linear(r + 1, d - adj_dim)

        self.layers = nn.ModuleList(PositionAttentionLayer(cfg) for _ in range(cfg.num_layers))

        head: list[nn.Module] = []
        in_dim = 2 * d
        for _ in range(cfg.head_mlp_layers - 1):
            head += [nn.Linear(in_dim, d), nn.SiLU()]
            in_dim = d
        head.append(nn.Linear(in_dim, 1))
        self.head = nn.Sequential(*head)

        self.reset_parameters()

    def reset_parameters(self) -> None:
        """Fan-in scaled normal weights, zero biases, zero output layer (initial score is 0)."""
        for module in self.modules():
            if isinstance(module, nn.Linear):
                nn.init.normal_(module.weight, std=module.in_features**-0.5)
                if module.bias is not None:
                    nn.init.zeros_(module.bias)
        last = self.head[-1]
        nn.init.zeros_(last.weight)
        nn.init.zeros_(last.bias)

    def num_parameters(self) -> int:
        return sum(param.numel() for param in self.parameters())

    def extract(self, A: torch.Tensor, A_bar: torch.Tensor, node_mask: torch.Tensor) -> GraphFeatures:
        return extract_features(
            A,
            A_bar,
            node_mask,
            rw_steps=self.cfg.rw_steps,
            max_degree=self.cfg.max_degree,
            gamma=self.cfg.gamma,
        )

    def init_features(
        self,
        A: torch.Tensor,
        A_bar: torch.Tensor,
        t: torch.Tensor,
        node_mask: torch.Tensor,
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor, GraphFeatures]:
        """Returns (h0, p0, e0, time embedding, extracted features)."""
        feats = self.extract(A, A_bar, node_mask)
        t = t.to(A.dtype).expand(A.shape[0]) if t.dim() == 0 else t.to(A.dtype)
        temb = self.time_embed(t)

        node_weight = node_mask.to(A.dtype).unsqueeze(-1)
        pair_weight = (node_mask.unsqueeze(-1) & node_mask.unsqueeze(-2)).to(A.dtype).unsqueeze(-1)

        h0 = (self.degree_embed(feats.degree_onehot) + self.h_time(temb).unsqueeze(1)) * node_weight
        if self.cfg.use_position:
            p0 = (self.position_embed(feats.landing) + self.p_time(temb).unsqueeze(1)) * node_weight
        else:
            p0 = torch.zeros_like(feats.landing)
        spd = feats.spd_onehot if self.cfg.use_spd else torch.zeros_like(feats.spd_onehot)
        e0 = torch.cat([self.adj_embed(A.unsqueeze(-1)), self.spd_embed(spd)], dim=-1)
        e0 = (e0 + self.e_time(temb)[:, None, None, :]) * pair_weight
        return h0, p0, e0, temb, feats

    def forward(
        self,
        A: torch.Tensor,
        A_bar: torch.Tensor,
        t: torch.Tensor,
        node_mask: torch.Tensor,
    ) -> torch.Tensor:
        h, p, e, temb, feats = self.init_features(A, A_bar, t, node_mask)
        _check_finite("init_features", h, p, e)
        e0 = e
        for index, layer in enumerate(self.layers):
            h, p, e = layer(h, p, e, feats.neighbours, node_mask, temb)
            _check_finite(f"layer_{index}", h, p, e)

        score = self.head(torch.cat([e, e0], dim=-1)).squeeze(-1)
        score = 0.5 * (score + score.transpose(-1, -2))
        score = score * pair_mask(node_mask).to(score.dtype)
        _check_finite("head", score)
        return score

    def score(self, state: DiffusionState) -> torch.Tensor:
        return self(state.A, state.A_bar, state.t, state.node_mask)
