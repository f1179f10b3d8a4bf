"""Closed-form achievable rates for the mixed-resolution ADC uplink.

The receiver applies a linear combiner ``w`` to the per-antenna outputs
``r`` and decodes with a nearest-neighbor metric matched to a Gaussian
codebook. The resulting achievable rate depends on the channel only through
two second-order moments of ``(r, x)``:

    r_rx = E[r x*]        (cross moment, one entry per antenna)
    r_rr = E[r r^H]       (output covariance)

For a one-bit output the moments follow the Gaussian sign-correlation laws:
the cross moment shrinks by sqrt(4 / (pi (g + 1))) where ``g`` is the
antenna's receive SNR, and pairs of one-bit outputs correlate through an
arcsine of the normalized input correlation. High-resolution outputs keep
the plain linear-channel moments. The rate for a combiner ``w`` is

    kappa = |w^H r_rx|^2 / (es * w^H r_rr w),    rate = -log(1 - kappa)

in nats, and the kappa-optimal combiner is the MMSE solution
``r_rr^-1 r_rx``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import switch_strongest, validate_switch
from .linalg import cholesky_pd, clipped_arcsin

__all__ = [
    "MomentPair",
    "GmiResult",
    "ZeroCombiner",
    "build_r_rx",
    "build_r_rr",
    "build_moments",
    "kappa_given_w",
    "kappa_opt",
    "gmi_from_kappa",
    "capacity_conventional",
    "capacity_antenna_selection",
]


class ZeroCombiner(ValueError):
    """Combiner with zero output power cannot define a rate."""


@dataclass(frozen=True)
class MomentPair:
    """Cross moment E[r x*], output covariance E[r r^H], and symbol energy."""

    r_rx: np.ndarray
    r_rr: np.ndarray
    es: float


@dataclass(frozen=True)
class GmiResult:
    """Rate point: kappa in [0, 1), the rate in nats, and the decoder pair.

    ``combiner`` is the linear front end and ``scale`` the decoder's
    amplitude estimate; at the optimal combiner the scale equals kappa.
    """

    kappa: float
    gmi_nats: float
    combiner: np.ndarray
    scale: complex


def gmi_from_kappa(kappa: float) -> float:
    """Rate in nats for a given kappa, -log(1 - kappa)."""
    return float(-np.log1p(-kappa))


def one_bit_shrink(denom: np.ndarray) -> np.ndarray:
    """Cross-moment shrink factor sqrt(4 / (pi * denom)) of a one-bit output.

    ``denom`` is the per-antenna total input power (receive SNR plus noise
    variance); dithering enters by inflating it.
    """
    return np.sqrt(4.0 / (np.pi * np.asarray(denom, dtype=float)))


def _covariance(gram: np.ndarray, delta: np.ndarray, denom: np.ndarray) -> np.ndarray:
    """Assemble E[r r^H] from the scaled input Gram matrix.

    Parameters
    ----------
    gram : ndarray
        Hermitian matrix of scaled input cross powers: entry (n, m) is the
        covariance E[y_n y_m*] of the noiseless antenna inputs (signal part
        only), so its diagonal is the per-antenna receive SNR.
    delta : ndarray of bool
        True for high-resolution antennas.
    denom : ndarray
        Per-antenna total input power (diagonal of gram plus noise variance).
    """
    shrink = one_bit_shrink(denom)
    taper = np.where(delta, 1.0, shrink)
    cov = gram * np.outer(taper, taper)
    one_bit = ~delta
    if one_bit.any():
        block = np.ix_(one_bit, one_bit)
        scale = np.sqrt(denom[one_bit])
        norm = np.outer(scale, scale)
        cov[block] = (4.0 / np.pi) * (
            clipped_arcsin(gram[block].real / norm)
            + 1j * clipped_arcsin(gram[block].imag / norm)
        )
    # diagonal: 1 + receive SNR for high resolution, constant 2 for one-bit
    np.fill_diagonal(cov, 1.0 + np.where(delta, np.diagonal(gram).real, 1.0))
    return cov


def _noise_denominators(gram_diag: np.ndarray) -> np.ndarray:
    return np.asarray(gram_diag, dtype=float) + 1.0


def build_r_rx(h: np.ndarray, delta: np.ndarray, es: float, denom=None) -> np.ndarray:
    """Cross moment E[r x*] of the quantized outputs with the sent symbol.

    High-resolution entries are ``h_n es``; one-bit entries shrink by
    sqrt(4 / (pi (|h_n|^2 es + 1))).
    """
    h = np.asarray(h, dtype=complex)
    delta = validate_switch(delta, h.shape[0])
    _check_es(es)
    if denom is None:
        denom = _noise_denominators(np.abs(h) ** 2 * es)
    taper = np.where(delta, 1.0, one_bit_shrink(denom))
    return h * es * taper


def build_r_rr(h: np.ndarray, delta: np.ndarray, es: float, denom=None) -> np.ndarray:
    """Output covariance E[r r^H] of the mixed-resolution antenna array."""
    h = np.asarray(h, dtype=complex)
    delta = validate_switch(delta, h.shape[0])
    _check_es(es)
    gram = np.outer(h, h.conj()) * es
    if denom is None:
        denom = _noise_denominators(np.diagonal(gram).real)
    return _covariance(gram, delta, np.asarray(denom, dtype=float))


def build_moments(h: np.ndarray, delta: np.ndarray, es: float, denom=None) -> MomentPair:
    """Both closed-form moments for a channel and switch pattern."""
    return MomentPair(
        r_rx=build_r_rx(h, delta, es, denom),
        r_rr=build_r_rr(h, delta, es, denom),
        es=float(es),
    )


def kappa_given_w(w: np.ndarray, moments: MomentPair) -> float:
    """kappa of an arbitrary combiner, |w^H r_rx|^2 / (es w^H r_rr w)."""
    w = np.asarray(w, dtype=complex)
    power = np.vdot(w, moments.r_rr @ w).real
    if not power > 0.0:
        raise ZeroCombiner("combiner output power is zero")
    return float(np.abs(np.vdot(w, moments.r_rx)) ** 2 / (moments.es * power))


def kappa_opt(moments: MomentPair) -> GmiResult:
    """Rate of the kappa-optimal (MMSE) combiner ``r_rr^-1 r_rx``.

    Shares one Cholesky factorization between kappa and the combiner:
    with r_rr = low low^H and y = low^-1 r_rx,

        kappa = ||y||^2 / es,    w = low^-H y.
    """
    low = cholesky_pd(moments.r_rr)
    y = scipy.linalg.solve_triangular(low, moments.r_rx, lower=True, check_finite=False)
    kappa = float(np.vdot(y, y).real / moments.es)
    w = scipy.linalg.solve_triangular(
        low.conj().T, y, lower=False, check_finite=False
    )
    scale = complex(np.vdot(w, moments.r_rx) / moments.es)
    return GmiResult(kappa=kappa, gmi_nats=gmi_from_kappa(kappa), combiner=w, scale=scale)


def capacity_conventional(h: np.ndarray, es: float) -> float:
    """Rate of an all-high-resolution array, log(1 + es ||h||^2), in nats."""
    h = np.asarray(h, dtype=complex)
    _check_es(es)
    return float(np.log1p(es * np.vdot(h, h).real))


def capacity_antenna_selection(h: np.ndarray, k: int, es: float) -> float:
    """Rate when only the k strongest antennas are converted, rest discarded."""
    h = np.asarray(h, dtype=complex)
    _check_es(es)
    delta = switch_strongest(h, k)
    return float(np.log1p(es * float(np.sum(np.abs(h[delta]) ** 2))))


def _check_es(es: float) -> None:
    if not es > 0.0:
        raise ValueError(f"symbol energy must be positive, got {es}")
