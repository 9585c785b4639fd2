"""Cube partitions, direction sets, wavenumber grids and the wave kernels.

All point sets are stored as ``(P, 3)`` float arrays. Cell quadrature is the
midpoint rule throughout: a cell contributes ``value(center) * volume``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InvalidArgumentError, SingularityError

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def _as_point(x, name: str = "point") -> np.ndarray:
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise InvalidArgumentError(f"{name} must have 3 components, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} has non-finite components")
    return arr


def unit_vector(v, name: str = "direction") -> np.ndarray:
    """Validate that ``v`` is a unit 3-vector and return it as an array."""
    arr = _as_point(v, name)
    if abs(np.linalg.norm(arr) - 1.0) > 1e-12:
        raise InvalidArgumentError(f"{name} must have unit norm, |{name}| = {np.linalg.norm(arr)!r}")
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform partition of an axis-aligned cube into ``n_per_axis**3`` cells.

    ``points[p]`` is the center of cell ``p``; cells are ordered
    lexicographically in the axis indices ``(i, j, l)`` with ``i`` (x) the
    slowest.
    """

    center: np.ndarray
    side: float
    n_per_axis: int
    points: np.ndarray = field(repr=False)
    volumes: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def spacing(self) -> float:
        return self.side / self.n_per_axis

    def axis_coordinates(self) -> np.ndarray:
        """Cell-center coordinates along one axis, relative to ``center``."""
        h = self.spacing
        return (np.arange(self.n_per_axis) + 0.5) * h - 0.5 * self.side

    def index(self, i: int, j: int, l: int) -> int:
        n = self.n_per_axis
        return (i * n + j) * n + l

    def same_as(self, other: "Grid") -> bool:
        return (
            self.n_per_axis == other.n_per_axis
            and self.side == other.side
            and np.array_equal(self.center, other.center)
        )


def partition_cube(center, side: float, n_per_axis: int) -> Grid:
    """Split the cube of edge ``side`` centered at ``center`` into equal cells.

    For even ``n_per_axis`` no cell center coincides with the cube center.
    """
    c = _as_point(center, "center")
    if not (np.isfinite(side) and side > 0):
        raise InvalidArgumentError(f"side must be positive, got {side!r}")
    if int(n_per_axis) != n_per_axis or n_per_axis < 1:
        raise InvalidArgumentError(f"n_per_axis must be a positive integer, got {n_per_axis!r}")
    n = int(n_per_axis)
    h = side / n
    axis = (np.arange(n) + 0.5) * h - 0.5 * side
    gx, gy, gz = np.meshgrid(axis + c[0], axis + c[1], axis + c[2], indexing="ij")
    points = np.column_stack([gx.ravel(), gy.ravel(), gz.ravel()])
    volumes = np.full(n**3, h**3)
    points.setflags(write=False)
    volumes.setflags(write=False)
    c.setflags(write=False)
    return Grid(center=c, side=float(side), n_per_axis=n, points=points, volumes=volumes)


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Observation directions ``betas`` (``(J, 3)``) and the incident direction."""

    betas: np.ndarray
    alpha0: np.ndarray

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=float)
        if betas.ndim != 2 or betas.shape[1] != 3:
            raise InvalidArgumentError(f"betas must be (J, 3), got {betas.shape}")
        if np.any(np.abs(np.linalg.norm(betas, axis=1) - 1.0) > 1e-12):
            raise InvalidArgumentError("every beta must be a unit vector")
        if len(np.unique(betas, axis=0)) != len(betas):
            raise InvalidArgumentError("betas must be pairwise distinct")
        alpha0 = unit_vector(self.alpha0, "alpha0")
        betas.setflags(write=False)
        alpha0.setflags(write=False)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "alpha0", alpha0)

    def __len__(self) -> int:
        return self.betas.shape[0]


def sphere_directions(count: int) -> np.ndarray:
    """Deterministic Fibonacci lattice of ``count`` unit vectors.

    Point ``i`` sits at height ``z = 1 - (2i + 1)/count`` and azimuth
    ``i * golden_angle``.
    """
    if int(count) != count or count < 1:
        raise InvalidArgumentError(f"count must be a positive integer, got {count!r}")
    i = np.arange(int(count), dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / count
    r = np.sqrt(1.0 - z * z)
    phi = GOLDEN_ANGLE * i
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


@dataclass(frozen=True)
class WavenumberGrid:
    """Candidate wavenumbers inside ``[a, b]``, strictly increasing."""

    a: float
    b: float
    candidates: tuple

    def __post_init__(self):
        if not (0 <= self.a < self.b):
            raise InvalidArgumentError(f"need 0 <= a < b, got a={self.a!r}, b={self.b!r}")
        ks = tuple(float(k) for k in self.candidates)
        if not ks:
            raise InvalidArgumentError("candidate list is empty")
        if any(k2 <= k1 for k1, k2 in zip(ks, ks[1:])):
            raise InvalidArgumentError("candidates must be strictly increasing")
        if ks[0] < self.a or ks[-1] > self.b:
            raise InvalidArgumentError("candidates must lie in [a, b]")
        object.__setattr__(self, "candidates", ks)

    @classmethod
    def uniform(cls, a: float, b: float, count: int) -> "WavenumberGrid":
        """``count`` equispaced wavenumbers from ``a`` to ``b`` inclusive."""
        if count < 1:
            raise InvalidArgumentError("count must be >= 1")
        if count == 1:
            return cls(a, b, (0.5 * (a + b),))
        return cls(a, b, tuple(np.linspace(a, b, count)))

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)


def incident_wave(x, k: float, alpha0) -> complex:
    """Plane wave ``exp(i k alpha0 . x)``."""
    x = np.asarray(x, dtype=float)
    return np.exp(1j * k * (x @ np.asarray(alpha0, dtype=float)))


def greens_function(x, y, k: float) -> complex:
    """Outgoing Helmholtz kernel ``exp(i k r) / (4 pi r)``, ``r = |x - y|``."""
    r = float(np.linalg.norm(_as_point(x, "x") - _as_point(y, "y")))
    if r == 0.0:
        raise SingularityError("greens_function is singular at x == y")
    return complex(np.exp(1j * k * r) / (4.0 * math.pi * r))


def greens_matrix(points: np.ndarray, k: float) -> np.ndarray:
    """Kernel matrix ``g(y_p, y_q, k)`` for ``p != q`` with a zero diagonal.

    The self-cell term is excluded rather than regularized; callers add any
    diagonal contribution themselves.
    """
    r = cdist(points, points)
    np.fill_diagonal(r, 1.0)
    if np.any(r == 0.0):
        raise SingularityError("two grid points coincide")
    g = np.exp(1j * k * r) / (4.0 * math.pi * r)
    np.fill_diagonal(g, 0.0)
    return g
