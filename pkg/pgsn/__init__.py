from .layers import PositionAttentionLayer, TimeEmbedding, masked_softmax, sinusoidal_embedding
from .model import PgsnConfig
from .network import PositionEnhancedScoreNetwork

__all__ = [
    "PgsnConfig",
    "PositionAttentionLayer",
    "PositionEnhancedScoreNetwork",
    "TimeEmbedding",
    "masked_softmax",
    "sinusoidal_embedding",
]
