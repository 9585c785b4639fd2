"""Dense direct solves, conditioning estimates and the regularized DSM iteration.

The first-kind amplitude system is solved with a continuously regularized
Newton-type flow (the dynamical systems method) discretized as::

    h_{n+1} = h_n - (T + eps_n I)^{-1} (T h_n + eps_n h_n - M^H f),  T = M^H M

with geometrically decaying ``eps_n`` and a discrepancy-principle stop
``||M h_n - f|| <= C * delta``. Steps are evaluated in the singular basis
of ``M``, so ``T`` is never formed.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import InvalidArgumentError, NonConvergenceError, SingularSystemError

log = logging.getLogger(__name__)

DELTA_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Dense square system ``matrix @ x = rhs``."""

    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        b = np.asarray(self.rhs).reshape(-1)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError(f"matrix must be square, got {m.shape}")
        if b.shape[0] != m.shape[0]:
            raise InvalidArgumentError(f"rhs length {b.shape[0]} does not match matrix {m.shape}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rhs", b)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def residual(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(self.matrix @ x - self.rhs))


@dataclass(frozen=True)
class RegularizationConfig:
    """Parameters of the DSM iteration.

    With ``relative=True`` (the default) ``eps0`` and ``min_eps`` are
    multiples of ``||T||_2 = ||M||_2^2``.
    """

    eps0: float = 1e-2
    decay: float = 0.5
    discrepancy_constant: float = 1.01
    max_steps: int = 60
    min_eps: float = 1e-20
    relative: bool = True

    def __post_init__(self):
        if not self.eps0 > 0:
            raise InvalidArgumentError("eps0 must be positive")
        if not 0 < self.decay < 1:
            raise InvalidArgumentError("decay must lie in (0, 1)")
        if not self.discrepancy_constant >= 1:
            raise InvalidArgumentError("discrepancy_constant must be >= 1")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise InvalidArgumentError("max_steps must be a positive integer")
        if not self.min_eps > 0:
            raise InvalidArgumentError("min_eps must be positive")
        if self.min_eps > self.eps0:
            raise InvalidArgumentError("min_eps must not exceed eps0")


@dataclass(frozen=True)
class SolveDiagnostics:
    steps_taken: int
    final_epsilon: float
    final_discrepancy: float
    condition_proxy: float
    delta_effective: float = 0.0
    target: float = 0.0
    history: tuple = field(default=(), repr=False)


def _lu(matrix: np.ndarray):
    """LU factors plus the LAPACK reciprocal 1-norm condition estimate."""
    a = np.asarray(matrix)
    if not np.iscomplexobj(a):
        a = a.astype(float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=True)
    if np.any(np.diag(lu) == 0):
        return lu, piv, 0.0
    gecon = lapack.zgecon if np.iscomplexobj(lu) else lapack.dgecon
    anorm = float(np.abs(a).sum(axis=0).max())
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        raise RuntimeError(f"gecon failed with info={info}")
    return lu, piv, float(rcond)


def _log10_condition(rcond: float) -> float:
    if rcond <= np.finfo(float).eps:
        return float("inf")
    return float(-np.log10(rcond))


def condition_proxy(matrix) -> float:
    """Estimate ``log10(||M||_1 ||M^{-1}||_1)`` from the LU factors of ``M``.

    Returns ``inf`` for an exactly zero pivot or a reciprocal condition
    estimate at or below machine epsilon.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"matrix must be square, got {a.shape}")
    _, _, rcond = _lu(a)
    return _log10_condition(rcond)


def direct_solve(system: LinearSystem) -> np.ndarray:
    """LU with partial pivoting. Raises :class:`SingularSystemError` on pivot collapse."""
    lu, piv, rcond = _lu(system.matrix)
    proxy = _log10_condition(rcond)
    if not np.isfinite(proxy):
        raise SingularSystemError(
            f"matrix is numerically singular (rcond={rcond:.3e})", log10_condition=proxy
        )
    return sla.lu_solve((lu, piv), system.rhs)


def dsm_solve(
    system: LinearSystem,
    delta: float,
    config: RegularizationConfig | None = None,
    monitor: bool = False,
):
    """Regularized solve of an ill-conditioned system with a discrepancy stop.

    Parameters
    ----------
    system : LinearSystem
        Matrix ``M`` and noisy right-hand side ``f``.
    delta : float
        Noise level ``||f - f_exact||_2``. Zero is replaced by
        ``1e-12 * ||f||_2``.
    config : RegularizationConfig, optional
    monitor : bool
        Raise ``AssertionError`` if the discrepancy increases between steps.

    Returns
    -------
    h : ndarray
    diagnostics : SolveDiagnostics

    Raises
    ------
    NonConvergenceError
        ``max_steps`` reached with discrepancy above ``C * delta``.
    """
    config = config or RegularizationConfig()
    if delta < 0 or not np.isfinite(delta):
        raise InvalidArgumentError(f"delta must be a finite non-negative number, got {delta!r}")
    m, f = system.matrix, system.rhs
    fnorm = float(np.linalg.norm(f))
    delta_eff = delta if delta > 0 else DELTA_FLOOR * fnorm
    target = config.discrepancy_constant * delta_eff
    proxy = condition_proxy(m)

    # T = V diag(s^2) V^H and M^H f = V diag(s) U^H f, so every step is diagonal in V
    u, s, vh = sla.svd(m, full_matrices=False)
    b = u.conj().T @ f
    scale = float(s[0] ** 2) if config.relative else 1.0
    eps = config.eps0 * scale
    min_eps = config.min_eps * scale

    h = np.zeros(m.shape[1], dtype=np.result_type(m, f, complex))
    disc = fnorm
    history = [disc]
    if disc <= target:
        return h, SolveDiagnostics(0, eps, disc, proxy, delta_eff, target, tuple(history))

    s2 = s * s
    c = np.zeros_like(b)
    used_eps = eps
    for step in range(1, config.max_steps + 1):
        c = c - (s2 * c + eps * c - s * b) / (s2 + eps)
        h = vh.conj().T @ c
        new_disc = float(np.linalg.norm(m @ h - f))
        if monitor:
            assert new_disc <= disc * (1 + 1e-8) + 1e-14 * fnorm, (
                f"discrepancy increased at step {step}: {disc!r} -> {new_disc!r}"
            )
        disc = new_disc
        history.append(disc)
        used_eps = eps
        log.debug("dsm step %d eps=%.3e discrepancy=%.3e target=%.3e", step, eps, disc, target)
        if disc <= target:
            return h, SolveDiagnostics(step, used_eps, disc, proxy, delta_eff, target, tuple(history))
        eps = max(config.decay * eps, min_eps)

    diag = SolveDiagnostics(config.max_steps, used_eps, disc, proxy, delta_eff, target, tuple(history))
    raise NonConvergenceError(
        f"DSM did not reach discrepancy {target:.3e} in {config.max_steps} steps "
        f"(final {disc:.3e}, condition proxy {proxy:.2f})",
        diagnostics=diag,
        solution=h,
    )
