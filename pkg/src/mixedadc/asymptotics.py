"""Low- and high-SNR behavior of the mixed-resolution rate.

At vanishing symbol energy the rate grows linearly with a slope that
penalizes one-bit antennas by exactly 2/pi. At large symbol energy the
high-resolution antennas contribute the usual log growth while the one-bit
antennas saturate: their sign outputs depend only on the channel phases, and
the saturation value is a quadratic form in the phase vector against an
arcsine correlation matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import validate_switch
from .linalg import NotPositiveDefinite, clipped_arcsin, quadratic_form

__all__ = [
    "ZeroGainOneBitAntenna",
    "SingularLimitMatrix",
    "HighSnrComponents",
    "low_snr_slope",
    "high_snr_components",
    "one_bit_saturation",
    "one_bit_high_snr_limit",
]


class ZeroGainOneBitAntenna(ValueError):
    """A one-bit antenna with zero gain has no phase, so no high-SNR limit."""


class SingularLimitMatrix(ValueError):
    """The one-bit limit matrix is singular (degenerate phase pattern)."""


@dataclass(frozen=True)
class HighSnrComponents:
    """Pieces of the large-es expansion.

    ``p`` holds the high-resolution gains, ``q`` the unit-modulus phases of
    the one-bit antennas, and ``b`` the limiting covariance of the one-bit
    sign outputs, entry (n, m) = (4/pi)(arcsin Re(q_n q_m*) + i arcsin
    Im(q_n q_m*)) with diagonal 2.
    """

    p: np.ndarray
    q: np.ndarray
    b: np.ndarray


def low_snr_slope(h: np.ndarray, delta: np.ndarray) -> float:
    """Leading coefficient of the rate at small es, in nats per unit es.

    One-bit antennas keep fraction 2/pi of their gain contribution.
    """
    h = np.asarray(h, dtype=complex)
    delta = validate_switch(delta, h.shape[0])
    weight = np.where(delta, 1.0, 2.0 / np.pi)
    return float(np.sum(weight * np.abs(h) ** 2))


def high_snr_components(h: np.ndarray, delta: np.ndarray) -> HighSnrComponents:
    """Decompose a channel into its large-es ingredients."""
    h = np.asarray(h, dtype=complex)
    delta = validate_switch(delta, h.shape[0])
    p = h[delta]
    g = h[~delta]
    mags = np.abs(g)
    if np.any(mags == 0.0):
        raise ZeroGainOneBitAntenna("one-bit antenna with zero gain")
    q = g / mags
    cross = np.outer(q, q.conj())
    b = (4.0 / np.pi) * (
        clipped_arcsin(cross.real) + 1j * clipped_arcsin(cross.imag)
    )
    np.fill_diagonal(b, 2.0)
    return HighSnrComponents(p=p, q=q, b=b)


def one_bit_saturation(comps: HighSnrComponents) -> float:
    """Quadratic form q^H b^-1 q; lies in [0, pi/4] when b is regular."""
    if comps.q.shape[0] == 0:
        return 0.0
    try:
        value = quadratic_form(comps.b, comps.q)
    except NotPositiveDefinite as exc:
        raise SingularLimitMatrix(str(exc)) from exc
    if value > np.pi / 4.0 + 1e-9:
        raise SingularLimitMatrix(
            f"saturation {value:.6f} above pi/4, limit matrix numerically singular"
        )
    return float(value)


def one_bit_high_snr_limit(h: np.ndarray) -> float:
    """Large-es rate limit of an all-one-bit array, in nats.

    Equal to log(pi / (pi - 4 q^H b^-1 q)). For a single antenna this is
    log(pi / (pi - 2)).
    """
    h = np.asarray(h, dtype=complex)
    comps = high_snr_components(h, np.zeros(h.shape[0], dtype=bool))
    sat = one_bit_saturation(comps)
    return float(np.log(np.pi) - np.log(np.pi - 4.0 * sat))
