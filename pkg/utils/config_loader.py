import os
import tomllib
from pathlib import Path
from typing import Any

_DEFAULT_ENV_FILE: Path = Path(__file__).resolve().parents[1] / "env.toml"
_MISSING = object()

_config: dict[str, Any] | None = None


def _env_file() -> Path:
    return Path(os.environ.get("GRAPHDIFF_ENV_FILE", _DEFAULT_ENV_FILE))


def _load_config() -> dict[str, Any]:
    global _config
    if _config is None:
        path = _env_file()
        if not path.exists():
            raise FileNotFoundError(f"Configuration file not found: {path}")

        with open(path, "rb") as f:
            _config = tomllib.load(f)

    return _config


def reload_config() -> None:
    """캐시된 env.toml 을 비워 다음 조회 시 다시 읽도록 함"""
    global _config
    _config = None


def get_config(section: str, key: str, default: Any = _MISSING) -> Any:
    config: dict[str, Any] = _load_config()

    try:
        return config[section][key]
    except (KeyError, TypeError):
        if default is not _MISSING:
            return default
        raise KeyError(f"Configuration key '{section}.{key}' not found")


def load_toml(path: str | Path) -> dict[str, Any]:
    """Read an experiment config file (flat dotted keys are expanded by tomllib)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")
    with open(path, "rb") as f:
        return tomllib.load(f)
