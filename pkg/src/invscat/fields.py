"""Per-cell value arrays tied to a grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .grid import Grid


@dataclass(frozen=True, eq=False)
class Field:
    """One value per grid cell."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.grid.size,):
            raise InvalidArgumentError(
                f"field has shape {values.shape}, grid has {self.grid.size} cells"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("field values must be finite")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]


class RealField(Field):
    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        super().__post_init__()


class ComplexField(Field):
    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))
        super().__post_init__()
