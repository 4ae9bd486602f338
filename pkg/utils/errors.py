"""
패키지 공통 예외 계층
"""

from typing import Any


class GraphDiffusionError(Exception):
    """Root of every error raised by this package."""


class DomainError(GraphDiffusionError, ValueError):
    pass


class ContractViolationError(GraphDiffusionError, ValueError):
    pass


class ScoreSingularityError(GraphDiffusionError, ZeroDivisionError):
    pass


class NumericalError(GraphDiffusionError, ArithmeticError):
    def __init__(self, message: str, **diagnostics: Any) -> None:
        self.diagnostics: dict[str, Any] = diagnostics
        if diagnostics:
            detail = ", ".join(f"{key}={value}" for key, value in diagnostics.items())
            message = f"{message} ({detail})"
        super().__init__(message)


class DatasetFormatError(GraphDiffusionError, ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class SamplerError(GraphDiffusionError, RuntimeError):
    pass


class TrainingAbortedError(GraphDiffusionError, RuntimeError):
    pass
