from pathlib import Path
from typing import Any

import numpy as np
import orjson
import torch

_JSON_OPTIONS = orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2


def serialize_value(value: Any) -> Any:
    """orjson 이 직접 처리하지 못하는 값을 변환 (orjson ``default`` hook)"""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, torch.Tensor):
        return value.detach().cpu().tolist()
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "__class__") and "UUID" in value.__class__.__name__:
        return str(value)
    raise TypeError(f"Type is not JSON serializable: {type(value).__name__}")


def dump_json(data: Any, path: str | Path) -> None:
    Path(path).write_bytes(orjson.dumps(data, default=serialize_value, option=_JSON_OPTIONS))


def load_json(path: str | Path) -> Any:
    return orjson.loads(Path(path).read_bytes())


def dumps_record(record: dict[str, Any]) -> bytes:
    """One newline-terminated NDJSON record."""
    return orjson.dumps(
        record,
        default=serialize_value,
        option=orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_APPEND_NEWLINE,
    )
