from .commands import COMMANDS, build_parser, cmd_eval, cmd_gen_data, cmd_sample, cmd_train
from .main import EXIT_FAILURE, EXIT_INVALID, EXIT_OK, main
from .run_config import (
    DatasetConfig,
    RunConfig,
    apply_overrides,
    derive_seed,
    dumps_run_config,
    load_run_config,
    parse_override,
    save_run_config,
)

__all__ = [
    "COMMANDS",
    "DatasetConfig",
    "EXIT_FAILURE",
    "EXIT_INVALID",
    "EXIT_OK",
    "RunConfig",
    "apply_overrides",
    "build_parser",
    "cmd_eval",
    "cmd_gen_data",
    "cmd_sample",
    "cmd_train",
    "derive_seed",
    "dumps_run_config",
    "load_run_config",
    "main",
    "parse_override",
    "save_run_config",
]
