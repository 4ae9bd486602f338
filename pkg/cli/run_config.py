"""
실험 설정 (RunConfig) 과 flat TOML 직렬화
"""

import os
import tomllib
from pathlib import Path
from typing import Annotated, Any, Literal, Self

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field, model_validator

from pgsn.model import PgsnConfig
from sampling.model import SamplerConfig
from sde.model import VpSdeSchedule
from training.model import TrainConfig
from utils.config_loader import get_config, load_toml
from utils.errors import ContractViolationError

PHASES: tuple[str, ...] = ("data", "train", "sample", "eval")
_SECTIONS: tuple[str, ...] = ("dataset", "schedule", "model", "train", "sampler")
# sections whose ``seed`` is derived from the global seed unless given explicitly
_SEEDED_SECTIONS: dict[str, str] = {"dataset": "data", "train": "train", "sampler": "sample"}


def derive_seed(seed: int, phase: str) -> int:
    """Independent per-phase seed fanned out from the global one."""
    if phase not in PHASES:
        raise ValueError(f"unknown phase {phase!r}, expected one of {PHASES}")
    return int(np.random.SeedSequence([seed, PHASES.index(phase)]).generate_state(1)[0])


def default_output_dir() -> str:
    return os.environ.get("GRAPHDIFF_OUTPUT_ROOT") or get_config("paths", "output_root", "runs")


class DatasetConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Annotated[Literal["community_small", "er", "edge_list"], Field(description="Dataset source")] = "community_small"
    count: Annotated[int, Field(gt=0, description="Graphs to generate")] = Field(
        default_factory=lambda: int(get_config("community_small", "count", 100))
    )
    path: Annotated[str | None, Field(description="Edge-list file for name = edge_list")] = None
    er_nodes: Annotated[int, Field(gt=0)] = 16
    er_p: Annotated[float, Field(ge=0, le=1)] = 0.3
    strict: Annotated[bool, Field(description="Reject duplicate edges in edge-list input")] = False
    seed: int = 0

    @model_validator(mode="after")
    def check_path(self) -> Self:
        if self.name == "edge_list" and not self.path:
            raise ValueError("dataset.path is required for the edge_list dataset")
        return self


class RunConfig(BaseModel):
    """Every knob of one experiment; round-trips through flat ``section.key = value`` TOML."""

    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    output_dir: str = Field(default_factory=default_output_dir)
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    schedule: VpSdeSchedule = Field(default_factory=VpSdeSchedule)
    model: PgsnConfig = Field(default_factory=PgsnConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)

    @model_validator(mode="before")
    @classmethod
    def fan_out_seeds(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        seed = int(data.get("seed", 0))
        data = dict(data)
        for section, phase in _SEEDED_SECTIONS.items():
            values = data.get(section)
            if isinstance(values, BaseModel):
                continue
            values = dict(values or {})
            values.setdefault("seed", derive_seed(seed, phase))
            data[section] = values
        return data

    @property
    def out(self) -> Path:
        return Path(self.output_dir)


def _toml_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        # JSON string escapes are valid TOML basic-string escapes
        return orjson.dumps(value).decode()
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(item) for item in value) + "]"
    raise TypeError(f"cannot write {type(value).__name__} as a TOML value")


def dumps_run_config(config: RunConfig) -> str:
    data = config.model_dump()
    lines = [f"{key} = {_toml_value(data[key])}" for key in ("seed", "output_dir")]
    for section in _SECTIONS:
        for key, value in data[section].items():
            # TOML has no null; absent keys fall back to the default None
            if value is not None:
                lines.append(f"{section}.{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"


def save_run_config(config: RunConfig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_run_config(config), encoding="utf-8")
    return path


def parse_override(item: str) -> tuple[list[str], Any]:
    """``section.key=value``; the value is read as a TOML literal, else kept as a bare string."""
    key, sep, raw = item.partition("=")
    if not sep or not key.strip():
        raise ContractViolationError(f"override must look like section.key=value, got {item!r}")
    try:
        value = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return key.strip().split("."), value


def apply_overrides(data: dict[str, Any], overrides: dict[str, Any] | list[str]) -> dict[str, Any]:
    """Merge dotted overrides into a nested dict, later entries winning."""
    items = overrides.items() if isinstance(overrides, dict) else (parse_override(item) for item in overrides)
    for key, value in items:
        path = key.split(".") if isinstance(key, str) else key
        node = data
        for part in path[:-1]:
            node = node.setdefault(part, {})
        node[path[-1]] = value
    return data


def load_run_config(path: str | Path | None = None, *overrides: dict[str, Any] | list[str]) -> RunConfig:
    """Config file first, then each override group in order (last wins)."""
    data = load_toml(path) if path is not None else {}
    for group in overrides:
        apply_overrides(data, group)
    return RunConfig.model_validate(data)
