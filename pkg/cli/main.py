from collections.abc import Sequence

from pydantic import ValidationError

from utils.errors import ContractViolationError, DatasetFormatError, DomainError
from utils.logger import attach_log_file, logger_instance

from .commands import COMMANDS, build_parser, flag_overrides
from .run_config import load_run_config

logger = logger_instance()

RUN_LOG_NAME = "run.log"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

_INVALID_INPUT = (ValidationError, DomainError, ContractViolationError, DatasetFormatError, FileNotFoundError)


def main(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand; 0 on success, 2 on invalid input, 1 on any other failure."""
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(args.config, flag_overrides(args), args.overrides)
        attach_log_file(config.out / RUN_LOG_NAME)
        logger.info(f"{args.command}: output_dir={config.output_dir} seed={config.seed}")
        result = COMMANDS[args.command](config, args)
        logger.info(f"{args.command} finished: {result}")
        return EXIT_OK
    except _INVALID_INPUT as e:
        logger.error(f"{args.command} rejected its input: {e}")
        return EXIT_INVALID
    except Exception:
        logger.exception(f"{args.command} failed")
        return EXIT_FAILURE
