import math

import torch
import torch.nn as nn
import torch.nn.functional as F

from .model import PgsnConfig

TIME_SCALE: float = 1000.0


def sinusoidal_embedding(t: torch.Tensor, dim: int) -> torch.Tensor:
    """Transformer-style sin/cos embedding of 1000 * t, shape (B, dim)."""
    half = dim // 2
    exponent = torch.arange(half, dtype=t.dtype, device=t.device) / max(half - 1, 1)
    freqs = torch.exp(-math.log(10000.0) * exponent)
    args = (TIME_SCALE * t).unsqueeze(-1) * freqs
    emb = torch.cat([torch.sin(args), torch.cos(args)], dim=-1)
    if dim % 2 == 1:
        emb = F.pad(emb, (0, 1))
    return emb


class TimeEmbedding(nn.Module):
    def __init__(self, dim: int) -> None:
        super().__init__()
        self.dim = dim
        self.mlp = nn.Sequential(nn.Linear(dim, dim), nn.SiLU(), nn.Linear(dim, dim))

    def forward(self, t: torch.Tensor) -> torch.Tensor:
        return self.mlp(sinusoidal_embedding(t, self.dim))


def masked_softmax(logits: torch.Tensor, mask: torch.Tensor, dim: int) -> torch.Tensor:
    """Softmax over ``mask``-ed entries; an empty neighbourhood yields all zeros."""
    filled = logits.masked_fill(~mask, torch.finfo(logits.dtype).min)
    return torch.softmax(filled, dim=dim) * mask.to(logits.dtype)


class PositionAttentionLayer(nn.Module):
    """One message passing layer over the thresholded edge set.

    Shapes: h (B, n, d), p (B, n, r), e (B, n, n, d), neighbours (B, n, n).
    """

    def __init__(self, cfg: PgsnConfig) -> None:
        super().__init__()
        d, r = cfg.hidden_dim, cfg.rw_steps
        self.cfg = cfg
        self.num_heads = cfg.num_heads
        self.head_dim = cfg.head_dim

        self.q_proj = nn.Linear(d + r, d)
        self.k_proj = nn.Linear(d + r, d)
        self.v_proj = nn.Linear(d + r, d)
        self.c_proj = nn.Linear(d, d)
        self.c_bar_proj = nn.Linear(d, d)
        self.position_proj = nn.Linear(r, d, bias=False)
        self.position_out = nn.Linear(d, r)

        self.W1 = nn.Linear(d, d)
        self.norm1 = nn.LayerNorm(d)
        self.time_proj = nn.Linear(cfg.time_embed_dim, d)
        self.ffn = nn.Sequential(nn.Linear(d, 2 * d), nn.SiLU(), nn.Linear(2 * d, d))
        self.norm2 = nn.LayerNorm(d)
        self.W2 = nn.Linear(d, d)

    def _heads(self, x: torch.Tensor) -> torch.Tensor:
        return x.reshape(*x.shape[:-1], self.num_heads, self.head_dim)

    def attention_weights(
        self,
        h: torch.Tensor,
        p: torch.Tensor,
        e: torch.Tensor,
        neighbours: torch.Tensor,
    ) -> torch.Tensor:
        """alpha[b, i, j, head], normalized over j in N(i)."""
        hp = torch.cat([h, p], dim=-1)
        q = self._heads(self.q_proj(hp))
        k = self._heads(self.k_proj(hp))
        c = self._heads(self.c_proj(e))
        logits = torch.einsum("bihd,bjhd,bijhd->bijh", q, k, c) / math.sqrt(self.head_dim)
        return masked_softmax(logits, neighbours.unsqueeze(-1), dim=2)

    def forward(
        self,
        h: torch.Tensor,
        p: torch.Tensor,
        e: torch.Tensor,
        neighbours: torch.Tensor,
        node_mask: torch.Tensor,
        temb: torch.Tensor,
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        B, n, d = h.shape
        node_weight = node_mask.to(h.dtype).unsqueeze(-1)

        attn = self.attention_weights(h, p, e, neighbours)
        v = self._heads(self.v_proj(torch.cat([h, p], dim=-1)))
        c_bar = self._heads(self.c_bar_proj(e))

        # m_h[b,i,j] = alpha_ij * (v_j o c_bar_ij)
        m_h = attn.unsqueeze(-1) * v.unsqueeze(1) * c_bar
        M_h = m_h.sum(dim=2).reshape(B, n, d)

        h_hat = self.norm1(M_h + self.W1(h))
        ffn_in = h_hat + self.time_proj(temb).unsqueeze(1)
        h_new = self.norm2(h_hat + self.ffn(ffn_in)) * node_weight

        if self.cfg.use_position:
            p_msg = self._heads(self.position_proj(p))
            M_p = (m_h * p_msg.unsqueeze(1)).sum(dim=2).reshape(B, n, d)
            p_new = (p + F.silu(self.position_out(M_p) + p)) * node_weight
        else:
            p_new = p

        if self.cfg.update_edges:
            pair_sum = h_new.unsqueeze(2) + h_new.unsqueeze(1)
            pair_weight = (node_mask.unsqueeze(-1) & node_mask.unsqueeze(-2)).to(e.dtype).unsqueeze(-1)
            e_new = (e + F.silu(self.W2(pair_sum))) * pair_weight
        else:
            e_new = e
        return h_new, p_new, e_new
