from typing import Annotated, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator


class PgsnConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    hidden_dim: Annotated[int, Field(gt=0, description="Node / edge embedding width d")] = 64
    num_layers: Annotated[int, Field(gt=0, description="Message passing layers L")] = 4
    num_heads: Annotated[int, Field(gt=0, description="Attention heads H")] = 8
    rw_steps: Annotated[int, Field(gt=0, description="Random walk steps r")] = 32
    gamma: Annotated[float, Field(ge=0, le=1, description="Edge-set threshold in unit scale")] = 0.2
    head_mlp_layers: Annotated[int, Field(gt=0, description="Layers of the per-edge score MLP")] = 2
    max_nodes: Annotated[int, Field(gt=1, description="Padding bound; degree onehot has max_nodes buckets")] = 20
    time_embed_dim: Annotated[int, Field(gt=1, description="Sinusoidal embedding width")] = 64
    use_position: Annotated[bool, Field(description="Landing-probability stream on/off")] = True
    use_spd: Annotated[bool, Field(description="Shortest-path-distance edge features on/off")] = True
    update_edges: Annotated[bool, Field(description="Edge update after message passing on/off")] = True

    @model_validator(mode="after")
    def check_heads(self) -> Self:
        if self.hidden_dim % self.num_heads != 0:
            raise ValueError("hidden_dim must be divisible by num_heads")
        return self

    @property
    def max_degree(self) -> int:
        return self.max_nodes - 1

    @property
    def head_dim(self) -> int:
        return self.hidden_dim // self.num_heads
