"""Test potentials and their sampling on a grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, SingularityError
from .fields import RealField
from .grid import Grid

KINDS = ("constant", "yukawa", "tabulated")


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    """Which potential to sample.

    ``constant`` uses ``value``; ``yukawa`` is ``exp(-|x|)/|x|``;
    ``tabulated`` carries one value per grid cell in grid order.
    """

    kind: str
    value: float = 0.0
    table: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown potential kind {self.kind!r}")
        if self.kind == "constant" and not np.isfinite(self.value):
            raise InvalidArgumentError("constant potential must be finite")
        if self.kind == "tabulated":
            if self.table is None:
                raise InvalidArgumentError("tabulated potential needs a table")
            table = np.asarray(self.table, dtype=float).reshape(-1)
            if not np.all(np.isfinite(table)):
                raise InvalidArgumentError("tabulated potential has non-finite values")
            object.__setattr__(self, "table", table)

    @classmethod
    def constant(cls, c: float) -> "PotentialSpec":
        return cls("constant", value=float(c))

    @classmethod
    def yukawa(cls) -> "PotentialSpec":
        return cls("yukawa")

    @classmethod
    def tabulated(cls, values) -> "PotentialSpec":
        return cls("tabulated", table=values)

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant({self.value!r})"
        if self.kind == "tabulated":
            return f"tabulated({len(self.table)})"
        return "yukawa"


def sample_potential(spec: PotentialSpec, grid: Grid) -> RealField:
    """Evaluate ``spec`` at every cell center of ``grid``."""
    if spec.kind == "constant":
        return RealField(grid, np.full(grid.size, spec.value))
    if spec.kind == "tabulated":
        if spec.table.shape[0] != grid.size:
            raise InvalidArgumentError(
                f"tabulated potential has {spec.table.shape[0]} values, grid has {grid.size}"
            )
        return RealField(grid, spec.table.copy())
    r = np.linalg.norm(grid.points, axis=1)
    if np.any(r == 0.0):
        raise SingularityError("yukawa potential is singular at the origin, which is a grid point")
    return RealField(grid, np.exp(-r) / r)
