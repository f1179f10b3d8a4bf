"""Multi-user uplink: several single-antenna users, one mixed-ADC array.

The channel is an (m, n) matrix, row per user, column per antenna. The
moment structure matches the single-user case with each antenna's scalar
gain replaced by its length-m gain vector: receive SNR becomes the column
norm squared times the per-user symbol energy, and cross powers become
h_n^T h_m*. The output covariance is shared by all users, so one
factorization serves every user's combiner and kappa.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import Rng, complex_normal, switch_by_gain, validate_switch
from .ergodic import ErgodicBounds, _check_rejections, _reduce_kappas
from .gmi import _covariance, one_bit_shrink
from .linalg import NotPositiveDefinite, cholesky_pd
from .parallel import map_trials

__all__ = [
    "MuMomentPair",
    "MuGmiResult",
    "build_mu_moments",
    "mu_kappa",
    "mu_low_snr_slope",
    "switch_norm_based",
    "switch_random",
    "mu_ergodic_bounds",
    "mu_antenna_selection_baseline",
]


@dataclass(frozen=True)
class MuMomentPair:
    """Cross moments for every user (column j belongs to user j) and the
    shared output covariance."""

    r_rx: np.ndarray
    r_rr: np.ndarray
    es: float


@dataclass(frozen=True)
class MuGmiResult:
    """Per-user kappas and rates plus the per-user combiners (columns)."""

    kappas: np.ndarray
    gmi_nats: np.ndarray
    combiners: np.ndarray
    es: float


def _as_channel_matrix(hh: np.ndarray) -> np.ndarray:
    hh = np.asarray(hh, dtype=complex)
    if hh.ndim != 2 or hh.shape[0] < 1 or hh.shape[1] < 1:
        raise ValueError(f"expected an (m, n) channel matrix, got shape {hh.shape}")
    return hh


def build_mu_moments(hh: np.ndarray, delta: np.ndarray, es: float) -> MuMomentPair:
    """Closed-form multi-user moments at per-user symbol energy ``es``."""
    hh = _as_channel_matrix(hh)
    m, n = hh.shape
    delta = validate_switch(delta, n)
    if not es > 0.0:
        raise ValueError(f"symbol energy must be positive, got {es}")
    gram = (hh.T @ hh.conj()) * es
    denom = np.diagonal(gram).real + 1.0
    taper = np.where(delta, 1.0, one_bit_shrink(denom))
    r_rx = hh.T * (es * taper)[:, None]
    r_rr = _covariance(gram, delta, denom)
    return MuMomentPair(r_rx=r_rx, r_rr=r_rr, es=float(es))


def mu_kappa(hh: np.ndarray, delta: np.ndarray, es: float) -> MuGmiResult:
    """Per-user kappa-optimal rates; one Cholesky solve serves all users."""
    moments = build_mu_moments(hh, delta, es)
    low = cholesky_pd(moments.r_rr)
    y = scipy.linalg.solve_triangular(low, moments.r_rx, lower=True, check_finite=False)
    kappas = (np.abs(y) ** 2).sum(axis=0) / moments.es
    combiners = scipy.linalg.solve_triangular(
        low.conj().T, y, lower=False, check_finite=False
    )
    gmis = -np.log1p(-kappas)
    return MuGmiResult(kappas=kappas, gmi_nats=gmis, combiners=combiners, es=moments.es)


def mu_low_snr_slope(hh: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Per-user low-SNR slope; one-bit antennas keep fraction 2/pi."""
    hh = _as_channel_matrix(hh)
    delta = validate_switch(delta, hh.shape[1])
    weight = np.where(delta, 1.0, 2.0 / np.pi)
    return (np.abs(hh) ** 2 * weight[None, :]).sum(axis=1)


def switch_norm_based(hh: np.ndarray, k: int) -> np.ndarray:
    """High-resolution pairs on the k antennas with the largest column norms."""
    hh = _as_channel_matrix(hh)
    return switch_by_gain((np.abs(hh) ** 2).sum(axis=0), k)


def switch_random(n: int, k: int, rng) -> np.ndarray:
    """Uniformly random k-subset; accepts an Rng or a numpy Generator."""
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}]")
    gen = rng.generator() if isinstance(rng, Rng) else rng
    delta = np.zeros(n, dtype=bool)
    delta[gen.permutation(n)[:k]] = True
    return delta


def mu_ergodic_bounds(
    n: int,
    m: int,
    k: int,
    es_per_user: float,
    trials: int,
    rng: Rng,
    scheme="norm",
    workers: int = 1,
) -> ErgodicBounds:
    """Per-user ergodic sandwich for i.i.d. Rayleigh users.

    Users are exchangeable, so their kappas are pooled; standard errors use
    the per-trial means, which are independent across trials. ``scheme`` is
    "norm", "random", or a callable (hh, k, generator) -> pattern. Sum rate
    is m times the per-user bound.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}]")
    if scheme == "norm":
        pick = lambda hh, kk, gen: switch_norm_based(hh, kk)
    elif scheme == "random":
        pick = lambda hh, kk, gen: switch_random(hh.shape[1], kk, gen)
    elif callable(scheme):
        pick = scheme
    else:
        raise ValueError(f"unknown switching scheme {scheme!r}")

    def one_trial(i: int):
        gen = rng.substream(i).generator()
        rejects = 0
        for _ in range(64):
            hh = complex_normal(gen, (m, n))
            delta = validate_switch(pick(hh, k, gen), n)
            try:
                result = mu_kappa(hh, delta, es_per_user)
            except NotPositiveDefinite:
                rejects += 1
                continue
            return float(result.kappas.mean()), float(result.gmi_nats.mean()), rejects
        raise RuntimeError(f"trial {i}: {rejects} consecutive draws rejected")

    results = map_trials(one_trial, trials, workers)
    kappas = np.array([r[0] for r in results])
    gmis = np.array([r[1] for r in results])
    rejected = sum(r[2] for r in results)
    _check_rejections(rejected, trials)
    return _reduce_kappas(kappas, gmis, trials, rejected)


def mu_antenna_selection_baseline(hh: np.ndarray, k: int, es: float) -> MuGmiResult:
    """Antenna selection: keep the k largest-norm columns, all high resolution."""
    hh = _as_channel_matrix(hh)
    if not 1 <= k <= hh.shape[1]:
        raise ValueError(f"selection needs k in [1, {hh.shape[1]}], got {k}")
    keep = switch_norm_based(hh, k)
    sub = hh[:, keep]
    return mu_kappa(sub, np.ones(k, dtype=bool), es)
