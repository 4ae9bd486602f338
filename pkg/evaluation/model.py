from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

DescriptorKind = Literal["degree", "clustering", "spectrum"]
DESCRIPTOR_KINDS: tuple[DescriptorKind, ...] = ("degree", "clustering", "spectrum")


class DescriptorHistogram(BaseModel):
    """Normalized histogram of one graph statistic (sums to 1)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: DescriptorKind
    values: Annotated[np.ndarray, Field(description="Nonnegative bin masses")]

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, value) -> np.ndarray:
        values = np.asarray(value, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError(f"histogram must be one-dimensional, got shape {values.shape}")
        if np.any(values < 0):
            raise ValueError("histogram values must be nonnegative")
        return values

    @property
    def bins(self) -> int:
        return int(self.values.shape[0])


class DescriptorScore(BaseModel):
    mmd: Annotated[float, Field(ge=-1e-9)]
    sigma: Annotated[float, Field(gt=0, description="Kernel bandwidth attaining the maximum")]


class MmdReport(BaseModel):
    """Max-over-sigma MMD per descriptor for a generated set and the train/test reference."""

    generated: dict[DescriptorKind, DescriptorScore]
    reference: dict[DescriptorKind, DescriptorScore]
    baseline: dict[DescriptorKind, DescriptorScore] | None = None

    @staticmethod
    def _average(scores: dict[DescriptorKind, DescriptorScore]) -> float:
        return float(np.mean([scores[kind].mmd for kind in DESCRIPTOR_KINDS]))

    @property
    def average(self) -> float:
        return self._average(self.generated)

    @property
    def reference_average(self) -> float:
        return self._average(self.reference)

    @property
    def baseline_average(self) -> float | None:
        return None if self.baseline is None else self._average(self.baseline)
