from .config_loader import get_config, load_toml, reload_config
from .errors import (
    ContractViolationError,
    DatasetFormatError,
    DomainError,
    GraphDiffusionError,
    NumericalError,
    SamplerError,
    ScoreSingularityError,
    TrainingAbortedError,
)
from .logger import attach_log_file, logger_instance
from .serializer import dump_json, dumps_record, load_json, serialize_value

__all__ = [
    "ContractViolationError",
    "DatasetFormatError",
    "DomainError",
    "GraphDiffusionError",
    "NumericalError",
    "SamplerError",
    "ScoreSingularityError",
    "TrainingAbortedError",
    "attach_log_file",
    "dump_json",
    "dumps_record",
    "get_config",
    "load_json",
    "load_toml",
    "logger_instance",
    "reload_config",
    "serialize_value",
]
