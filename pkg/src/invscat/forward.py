"""Discretized Lippmann-Schwinger solve and far-field amplitude synthesis.

The collocation points coincide with the cell centers, and the singular
self-cell interaction is left out of the discrete integral operator so that
the forward discretization matches the one used by the reconstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import InvalidArgumentError, SingularSystemError
from .fields import ComplexField, RealField
from .grid import DirectionSet, Grid, greens_matrix, unit_vector
from .solvers import LinearSystem, _log10_condition, _lu


@dataclass(frozen=True, eq=False)
class ScatteringDataset:
    """Amplitudes ``A[j, m]`` for direction ``j`` and wavenumber ``m``.

    ``exact_amplitudes`` is set when the data were synthesized; ``delta_star``
    and ``delta`` are set once noise has been added.
    """

    directions: DirectionSet
    wavenumbers: np.ndarray
    amplitudes: np.ndarray
    exact_amplitudes: np.ndarray | None = None
    delta_star: float | None = None
    delta: float | None = None
    noise_mode: str | None = None

    def __post_init__(self):
        ks = np.asarray(self.wavenumbers, dtype=float).reshape(-1)
        amps = np.asarray(self.amplitudes, dtype=complex)
        shape = (len(self.directions), ks.shape[0])
        if amps.shape != shape:
            raise InvalidArgumentError(f"amplitudes have shape {amps.shape}, expected {shape}")
        object.__setattr__(self, "wavenumbers", ks)
        object.__setattr__(self, "amplitudes", amps)
        if self.exact_amplitudes is not None:
            exact = np.asarray(self.exact_amplitudes, dtype=complex)
            if exact.shape != shape:
                raise InvalidArgumentError("exact_amplitudes shape mismatch")
            object.__setattr__(self, "exact_amplitudes", exact)

    @property
    def betas(self) -> np.ndarray:
        return self.directions.betas

    @property
    def alpha0(self) -> np.ndarray:
        return self.directions.alpha0

    @property
    def is_noisy(self) -> bool:
        return self.delta_star is not None

    def k_index(self, k: float) -> int:
        """Column index of wavenumber ``k`` (nearest match within 1e-9 relative)."""
        i = int(np.argmin(np.abs(self.wavenumbers - k)))
        if abs(self.wavenumbers[i] - k) > 1e-9 * max(1.0, abs(k)):
            raise InvalidArgumentError(f"wavenumber {k!r} is not in the dataset")
        return i

    def column_noise(self, m: int) -> float:
        """Noise level of column ``m`` alone.

        Uses the exact amplitudes when present, otherwise apportions ``delta``
        by the column's share of the data norm.
        """
        if self.exact_amplitudes is not None:
            return float(np.linalg.norm(self.amplitudes[:, m] - self.exact_amplitudes[:, m]))
        if not self.delta:
            return 0.0
        total = np.linalg.norm(self.amplitudes)
        return float(self.delta * np.linalg.norm(self.amplitudes[:, m]) / total) if total else 0.0


def _check_grid_field(grid: Grid, field, name: str):
    if field.grid is not grid and not field.grid.same_as(grid):
        raise InvalidArgumentError(f"{name} was sampled on a different grid")


def assemble_forward_system(grid: Grid, q: RealField, k: float, alpha0) -> LinearSystem:
    """Matrix ``I + G diag(q * volumes)`` and incident-wave right-hand side."""
    _check_grid_field(grid, q, "q")
    if not k > 0:
        raise InvalidArgumentError(f"k must be positive, got {k!r}")
    alpha0 = unit_vector(alpha0, "alpha0")
    g = greens_matrix(grid.points, k)
    matrix = g * (q.values * grid.volumes)[None, :]
    matrix[np.diag_indices_from(matrix)] = 1.0
    rhs = np.exp(1j * k * (grid.points @ alpha0))
    return LinearSystem(matrix, rhs)


def solve_forward(system: LinearSystem, grid: Grid | None = None) -> np.ndarray | ComplexField:
    """Dense LU solve of the second-kind forward system.

    Returns a :class:`ComplexField` when ``grid`` is given, else the raw vector.
    """
    lu, piv, rcond = _lu(system.matrix)
    proxy = _log10_condition(rcond)
    if not np.isfinite(proxy):
        raise SingularSystemError(
            f"forward system is numerically singular (rcond={rcond:.3e})", log10_condition=proxy
        )
    u = sla.lu_solve((lu, piv), system.rhs)
    return ComplexField(grid, u) if grid is not None else u


def h_field(q: RealField, u: ComplexField) -> ComplexField:
    """Effective source ``q * u``."""
    if q.grid is not u.grid and not q.grid.same_as(u.grid):
        raise InvalidArgumentError("q and u live on different grids")
    return ComplexField(q.grid, q.values * u.values)


def far_field_matrix(grid: Grid, betas: np.ndarray, k: float) -> np.ndarray:
    """``exp(-i k beta_j . y_p) * volume_p`` for every direction and cell."""
    betas = np.atleast_2d(np.asarray(betas, dtype=float))
    return np.exp(-1j * k * (betas @ grid.points.T)) * grid.volumes[None, :]


def exact_amplitudes(grid: Grid, h: ComplexField, betas, k: float) -> np.ndarray:
    """``A(beta_j) = -(1/4 pi) sum_p exp(-i k beta_j . y_p) h_p volume_p``."""
    _check_grid_field(grid, h, "h")
    return -far_field_matrix(grid, betas, k) @ h.values / (4.0 * math.pi)


def forward_fields(grid: Grid, q: RealField, k: float, alpha0):
    """Total field ``u`` and source ``h`` at one wavenumber."""
    system = assemble_forward_system(grid, q, k, alpha0)
    u = solve_forward(system, grid)
    return u, h_field(q, u)


def generate_dataset(
    grid: Grid, q: RealField, betas, wavenumbers, alpha0
) -> ScatteringDataset:
    """Noise-free amplitudes for every ``(beta_j, k_m)`` pair."""
    directions = betas if isinstance(betas, DirectionSet) else DirectionSet(np.asarray(betas), alpha0)
    ks = np.asarray(list(wavenumbers), dtype=float)
    amps = np.zeros((len(directions), ks.shape[0]), dtype=complex)
    for m, k in enumerate(ks):
        try:
            _, h = forward_fields(grid, q, k, directions.alpha0)
        except SingularSystemError as exc:
            raise SingularSystemError(
                f"forward solve failed at k={k!r}: {exc}", log10_condition=exc.log10_condition
            ) from exc
        amps[:, m] = exact_amplitudes(grid, h, directions.betas, k)
    return ScatteringDataset(directions, ks, amps, exact_amplitudes=amps.copy())
