"""Relative sign-alternating perturbation of amplitude data."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .errors import InvalidArgumentError
from .forward import ScatteringDataset

MODES = ("alternating", "random")


def sign_pattern(shape, mode: str = "alternating", seed: int | None = None) -> np.ndarray:
    """+1/-1 per entry in row-major ``(j, m)`` order.

    ``alternating`` starts at +1 on entry ``(0, 0)``; ``random`` draws
    independent signs from ``numpy.random.default_rng(seed)``.
    """
    size = int(np.prod(shape))
    if mode == "alternating":
        signs = np.where(np.arange(size) % 2 == 0, 1.0, -1.0)
    elif mode == "random":
        signs = np.random.default_rng(seed).choice([-1.0, 1.0], size=size)
    else:
        raise InvalidArgumentError(f"unknown noise mode {mode!r}")
    return signs.reshape(shape)


def perturb(exact, delta_star: float, mode: str = "alternating", seed: int | None = None) -> np.ndarray:
    """Return ``exact * (1 + s * delta_star)`` with signs from :func:`sign_pattern`."""
    if not (delta_star >= 0 and np.isfinite(delta_star)):
        raise InvalidArgumentError(f"delta_star must be non-negative, got {delta_star!r}")
    exact = np.asarray(exact, dtype=complex)
    if delta_star == 0:
        return exact.copy()
    return exact * (1.0 + sign_pattern(exact.shape, mode, seed) * delta_star)


def noise_norm(noisy, exact) -> float:
    """Unweighted l2 norm of ``noisy - exact`` over all entries."""
    noisy = np.asarray(noisy)
    exact = np.asarray(exact)
    if noisy.shape != exact.shape:
        raise InvalidArgumentError(f"shape mismatch: {noisy.shape} vs {exact.shape}")
    return float(np.linalg.norm((noisy - exact).ravel()))


def add_noise(
    dataset: ScatteringDataset, delta_star: float, mode: str = "alternating", seed: int | None = None
) -> ScatteringDataset:
    """Noisy copy of a synthesized dataset with ``delta_star`` and ``delta`` filled in."""
    if dataset.exact_amplitudes is None:
        raise InvalidArgumentError("dataset has no exact amplitudes to perturb")
    exact = dataset.exact_amplitudes
    noisy = perturb(exact, delta_star, mode, seed)
    return replace(
        dataset,
        amplitudes=noisy,
        delta_star=float(delta_star),
        delta=noise_norm(noisy, exact),
        noise_mode=mode,
    )
