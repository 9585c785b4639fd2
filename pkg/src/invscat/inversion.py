"""Potential reconstruction from single-incidence amplitude data.

Pipeline at a fixed wavenumber ``k``:

1. pick ``k`` among the candidates where the amplitude matrix is best conditioned;
2. solve ``F h = -4 pi A(., k)`` with the DSM iteration, ``F[j, p] = exp(-i k beta_j . y_p) dV_p``;
3. recover ``q*_p = h_p / (exp(i k alpha0 . y_p) - sum_{p' != p} g(y_p, y_p', k) h_p' dV_p')``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, NoAdmissibleWavenumberError
from .fields import ComplexField, RealField
from .forward import ScatteringDataset, far_field_matrix
from .grid import Grid, WavenumberGrid, greens_matrix, unit_vector
from .solvers import LinearSystem, RegularizationConfig, SolveDiagnostics, condition_proxy, dsm_solve

DENOMINATOR_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class InversionReport:
    q_star: ComplexField
    chosen_k: float
    condition_proxy: float
    diagnostics: SolveDiagnostics
    imag_norm_ratio: float
    unreliable: np.ndarray
    noise_level: float
    relative_error: float | None = None
    compatibility_spread: float | None = None


def assemble_amplitude_matrix(grid: Grid, betas, k: float) -> np.ndarray:
    """Square first-kind matrix ``exp(-i k beta_j . y_p) * dV_p``."""
    betas = np.atleast_2d(np.asarray(betas, dtype=float))
    if betas.shape[0] != grid.size:
        raise InvalidArgumentError(
            f"need as many directions as cells: {betas.shape[0]} directions, {grid.size} cells"
        )
    return far_field_matrix(grid, betas, k)


def amplitude_rhs(dataset: ScatteringDataset, k_index: int) -> np.ndarray:
    """``-4 pi A(beta_j, k_m)`` for column ``k_index``."""
    n = dataset.wavenumbers.shape[0]
    if not -n <= k_index < n:
        raise IndexError(f"k_index {k_index} out of range for {n} wavenumbers")
    return -4.0 * math.pi * dataset.amplitudes[:, k_index]


def rank_wavenumbers(grid: Grid, betas, candidates) -> list[tuple[float, float]]:
    """``(proxy, k)`` for every candidate, best conditioned first. Stable on ties."""
    ks = list(candidates)
    if not ks:
        raise InvalidArgumentError("no candidate wavenumbers")
    scored = [(condition_proxy(assemble_amplitude_matrix(grid, betas, k)), float(k)) for k in ks]
    return sorted(scored, key=lambda item: item[0])


def select_wavenumber(grid: Grid, betas, candidates: WavenumberGrid | Sequence[float]):
    """Candidate with the smallest condition proxy, and that proxy."""
    proxy, k = rank_wavenumbers(grid, betas, candidates)[0]
    if not np.isfinite(proxy):
        raise NoAdmissibleWavenumberError("amplitude matrix is singular at every candidate wavenumber")
    return k, proxy


def reconstruct_potential(grid: Grid, h, k: float, alpha0):
    """Pointwise potential from the source ``h``.

    Returns
    -------
    q_star : ComplexField
    unreliable : ndarray of bool
        Cells whose denominator fell below ``1e-10 * (1 + ||h||)``; their
        value is set to zero instead of dividing.
    """
    h = np.asarray(getattr(h, "values", h), dtype=complex)
    if h.shape != (grid.size,):
        raise InvalidArgumentError(f"h has shape {h.shape}, grid has {grid.size} cells")
    alpha0 = unit_vector(alpha0, "alpha0")
    incident = np.exp(1j * k * (grid.points @ alpha0))
    denom = incident - greens_matrix(grid.points, k) @ (h * grid.volumes)
    unreliable = np.abs(denom) < DENOMINATOR_FLOOR * (1.0 + np.linalg.norm(h))
    q_star = np.zeros_like(h)
    ok = ~unreliable
    q_star[ok] = h[ok] / denom[ok]
    return ComplexField(grid, q_star), unreliable


def _values(f):
    return np.asarray(getattr(f, "values", f))


def relative_error(q, q_star, volumes=None) -> float:
    """Volume-weighted relative l2 distance ``||q - q*|| / ||q||``."""
    qv, sv = _values(q), _values(q_star)
    if qv.shape != sv.shape:
        raise InvalidArgumentError(f"shape mismatch: {qv.shape} vs {sv.shape}")
    if volumes is None:
        volumes = q.grid.volumes if hasattr(q, "grid") else np.ones(qv.shape)
    den = float(np.sum(np.abs(qv) ** 2 * volumes))
    if den == 0:
        raise ZeroDivisionError("reference potential is identically zero")
    return math.sqrt(float(np.sum(np.abs(qv - sv) ** 2 * volumes)) / den)


def imag_norm_ratio(q_star) -> float:
    v = _values(q_star)
    total = np.linalg.norm(v)
    return float(np.linalg.norm(v.imag) / total) if total else 0.0


def _solve_column(dataset: ScatteringDataset, grid: Grid, config, m: int):
    k = float(dataset.wavenumbers[m])
    matrix = assemble_amplitude_matrix(grid, dataset.betas, k)
    noise = 4.0 * math.pi * dataset.column_noise(m)
    h, diag = dsm_solve(LinearSystem(matrix, amplitude_rhs(dataset, m)), noise, config)
    q_star, unreliable = reconstruct_potential(grid, h, k, dataset.alpha0)
    return q_star, unreliable, diag, noise


def compatibility_spread(
    dataset: ScatteringDataset,
    grid: Grid,
    config: RegularizationConfig | None,
    k_list: Sequence[float],
) -> float:
    """Largest pairwise relative distance between reconstructions at ``k_list``.

    Each pair is measured with :func:`relative_error`, taking the earlier
    wavenumber in ``k_list`` as the reference.
    """
    admissible = []
    for k in k_list:
        m = dataset.k_index(k)
        if np.isfinite(condition_proxy(assemble_amplitude_matrix(grid, dataset.betas, dataset.wavenumbers[m]))):
            admissible.append(m)
    if len(admissible) < 2:
        raise InvalidArgumentError("compatibility check needs at least two admissible wavenumbers")
    cache = {}
    for m in dict.fromkeys(admissible):
        cache[m] = _solve_column(dataset, grid, config, m)[0]
    spread = 0.0
    for a, b in itertools.combinations(admissible, 2):
        qa, qb = cache[a], cache[b]
        if a == b:
            continue
        if not np.any(qa.values):
            d = 0.0 if not np.any(qb.values) else math.inf
        else:
            d = relative_error(qa, qb)
        spread = max(spread, d)
    return spread


def invert(
    dataset: ScatteringDataset,
    grid: Grid,
    config: RegularizationConfig | None = None,
    truth: RealField | None = None,
    candidates: Sequence[float] | None = None,
    compat_ks: Sequence[float] | None = None,
) -> InversionReport:
    """Select ``k``, solve the amplitude system, reconstruct ``q*`` and score it.

    ``candidates`` defaults to every wavenumber in the dataset. The DSM noise
    level is the noise of the selected data column, scaled by ``4 pi``.
    ``compat_ks="auto"`` compares the two best-conditioned candidates.
    """
    if len(dataset.directions) != grid.size:
        raise InvalidArgumentError(
            f"dataset has {len(dataset.directions)} directions, grid has {grid.size} cells"
        )
    ks = dataset.wavenumbers if candidates is None else candidates
    ranking = rank_wavenumbers(grid, dataset.betas, ks)
    proxy, k = ranking[0]
    if not np.isfinite(proxy):
        raise NoAdmissibleWavenumberError("amplitude matrix is singular at every candidate wavenumber")
    m = dataset.k_index(k)
    q_star, unreliable, diag, noise = _solve_column(dataset, grid, config, m)

    err = relative_error(truth, q_star) if truth is not None else None
    spread = None
    if isinstance(compat_ks, str) and compat_ks == "auto":
        finite = [kk for p, kk in ranking if np.isfinite(p)]
        compat_ks = finite[:2] if len(finite) >= 2 else None
    if compat_ks is not None:
        spread = compatibility_spread(dataset, grid, config, compat_ks)
    return InversionReport(
        q_star=q_star,
        chosen_k=k,
        condition_proxy=proxy,
        diagnostics=diag,
        imag_norm_ratio=imag_norm_ratio(q_star),
        unreliable=unreliable,
        noise_level=noise,
        relative_error=err,
        compatibility_spread=spread,
    )
