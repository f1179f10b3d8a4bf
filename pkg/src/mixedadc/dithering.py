"""Dithering of one-bit antennas whose receive SNR is too high.

A one-bit output saturates once its input is dominated by the signal; the
rate then stops improving with symbol energy. Injecting extra Gaussian noise
at strong one-bit antennas (dithering) restores amplitude diversity. The
policy is a single threshold ``t``: any one-bit antenna with receive SNR
``g > t`` gets enough dither to bring its signal-to-total-noise ratio down
to exactly ``t``, i.e. noise variance ``g / t`` in place of 1. In the moment
formulas that substitutes g + 1 -> g (1 + 1/t) for the dithered antennas.
High-resolution antennas are never dithered.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Rng, validate_switch
from .gmi import MomentPair, build_moments

__all__ = [
    "DitherPolicy",
    "dither_mask",
    "noise_variances",
    "noise_denominators",
    "dithered_moments",
    "optimize_threshold",
]


@dataclass(frozen=True)
class DitherPolicy:
    """Dither threshold on the per-antenna receive SNR, linear scale."""

    threshold: float

    def __post_init__(self) -> None:
        if not self.threshold > 0.0:
            raise ValueError("dither threshold must be positive")


def dither_mask(h: np.ndarray, delta: np.ndarray, es: float, policy: DitherPolicy) -> np.ndarray:
    """One-bit antennas whose receive SNR strictly exceeds the threshold."""
    h = np.asarray(h, dtype=complex)
    delta = validate_switch(delta, h.shape[0])
    gains = np.abs(h) ** 2 * es
    return (~delta) & (gains > policy.threshold)


def noise_variances(
    h: np.ndarray, delta: np.ndarray, es: float, policy: DitherPolicy | None
) -> np.ndarray:
    """Per-antenna total noise variance including injected dither."""
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if policy is None:
        return np.ones(n)
    gains = np.abs(h) ** 2 * es
    mask = dither_mask(h, delta, es, policy)
    return np.where(mask, gains / policy.threshold, 1.0)


def noise_denominators(
    h: np.ndarray, delta: np.ndarray, es: float, policy: DitherPolicy | None
) -> np.ndarray:
    """Per-antenna total input power, receive SNR plus total noise variance."""
    gains = np.abs(np.asarray(h, dtype=complex)) ** 2 * es
    return gains + noise_variances(h, delta, es, policy)


def dithered_moments(
    h: np.ndarray, delta: np.ndarray, es: float, policy: DitherPolicy
) -> MomentPair:
    """Closed-form moments with the dither policy applied.

    When no antenna exceeds the threshold this is bit-identical to the
    undithered moments.
    """
    denom = noise_denominators(h, delta, es, policy)
    return build_moments(h, delta, es, denom)


def optimize_threshold(
    n: int,
    es: float,
    grid: np.ndarray,
    trials: int,
    rng: Rng,
    workers: int = 1,
):
    """Grid-search the threshold maximizing the all-one-bit ergodic rate.

    Every candidate is evaluated on the same channel draws (common random
    numbers), so the comparison noise cancels and the arg max is stable at
    moderate trial counts. Ties keep the first grid point. Returns the
    winning threshold and its ergodic bounds.
    """
    from .ergodic import ergodic_bounds  # local import, ergodic depends on us

    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.shape[0] < 1:
        raise ValueError("threshold grid must be a nonempty 1-D array")
    best = None
    for t in grid:
        bounds = ergodic_bounds(
            n, 0, es, trials, rng, dither=DitherPolicy(float(t)), workers=workers
        )
        if best is None or bounds.lower_nats > best[1].lower_nats:
            best = (float(t), bounds)
    return best
