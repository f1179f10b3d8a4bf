"""Ergodic rate bounds over fading, with or without perfect CSI.

Per channel draw the closed-form kappa is computed, and the two bounds are

    lower = -log(1 - mean kappa)        (rate of the averaged kappa)
    upper = mean of -log(1 - kappa)     (averaged rate)

lower <= upper holds deterministically for the sample means because
-log(1 - kappa) is convex in kappa.

Imperfect CSI replaces the moments with their expectation over the
estimation error (analytic where separability allows, sampled otherwise)
and charges a training overhead of ceil(n / k) symbols per coherence block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    EstimatedChannel,
    Rng,
    complex_normal,
    draw_estimated,
    switch_strongest,
    validate_switch,
)
from .dithering import DitherPolicy, dithered_moments
from .gmi import MomentPair, build_moments, gmi_from_kappa, kappa_opt
from .linalg import NotPositiveDefinite, clipped_arcsin
from .parallel import map_trials

__all__ = [
    "ErgodicBounds",
    "TrainingConfig",
    "training_prefactor",
    "ergodic_bounds",
    "imperfect_moments",
    "imperfect_bounds",
]

# One trial may redraw at most this many times before giving up; combined
# with the global 0.1% rejection budget this bounds the total work.
_MAX_REDRAWS = 64

_REJECTION_BUDGET = 1e-3


@dataclass(frozen=True)
class ErgodicBounds:
    """Sandwich on the ergodic rate in nats, with standard errors."""

    lower_nats: float
    upper_nats: float
    stderr_lower: float
    stderr_upper: float
    trials: int
    rejected: int = 0


@dataclass(frozen=True)
class TrainingConfig:
    """Coherence block length in symbols; training eats ceil(n/k) of them."""

    coherence_len: int = 196


def training_prefactor(n: int, k: int, training: TrainingConfig) -> float:
    """Fraction of the coherence block left for payload, (T - ceil(n/k)) / T."""
    if k < 1:
        raise ValueError("training requires at least one high-resolution pair")
    pilot = math.ceil(n / k)
    if training.coherence_len <= pilot:
        raise ValueError(
            f"coherence length {training.coherence_len} cannot fit {pilot} pilot symbols"
        )
    return (training.coherence_len - pilot) / training.coherence_len


def _reduce_kappas(kappas: np.ndarray, gmis: np.ndarray, trials: int, rejected: int) -> ErgodicBounds:
    mean_k = float(kappas.mean())
    lower = gmi_from_kappa(mean_k)
    upper = float(gmis.mean())
    if trials > 1:
        se_mean = float(kappas.std(ddof=1)) / np.sqrt(trials)
        stderr_lower = se_mean / (1.0 - mean_k)
        stderr_upper = float(gmis.std(ddof=1)) / np.sqrt(trials)
    else:
        stderr_lower = stderr_upper = 0.0
    return ErgodicBounds(
        lower_nats=lower,
        upper_nats=upper,
        stderr_lower=float(stderr_lower),
        stderr_upper=float(stderr_upper),
        trials=trials,
        rejected=rejected,
    )


def _check_rejections(rejected: int, trials: int) -> None:
    if rejected > _REJECTION_BUDGET * trials:
        raise RuntimeError(
            f"{rejected} of {trials} channel draws rejected as non positive definite; "
            "aborting rather than biasing the average"
        )


def ergodic_bounds(
    n: int,
    k: int,
    es: float,
    trials: int,
    rng: Rng,
    switch=None,
    dither: DitherPolicy | None = None,
    workers: int = 1,
) -> ErgodicBounds:
    """Ergodic rate sandwich for Rayleigh fading with perfect CSI.

    ``switch`` maps (h, k, generator) to a boolean pattern and defaults to
    the k strongest antennas. A draw whose output covariance fails the
    positive-definite check is rejected and redrawn from the same trial
    substream; more than 0.1% rejections aborts the run.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}]")
    if switch is None:
        switch = lambda h, kk, gen: switch_strongest(h, kk)

    def one_trial(i: int):
        gen = rng.substream(i).generator()
        rejects = 0
        for _ in range(_MAX_REDRAWS):
            h = complex_normal(gen, n)
            delta = validate_switch(switch(h, k, gen), n)
            if dither is None:
                moments = build_moments(h, delta, es)
            else:
                moments = dithered_moments(h, delta, es, dither)
            try:
                return kappa_opt(moments).kappa, rejects
            except NotPositiveDefinite:
                rejects += 1
        raise RuntimeError(f"trial {i}: {rejects} consecutive draws rejected")

    results = map_trials(one_trial, trials, workers)
    kappas = np.array([r[0] for r in results])
    rejected = sum(r[1] for r in results)
    _check_rejections(rejected, trials)
    gmis = -np.log1p(-kappas)
    return _reduce_kappas(kappas, gmis, trials, rejected)


def imperfect_moments(
    est: EstimatedChannel,
    delta: np.ndarray,
    es: float,
    err_samples: int,
    rng: Rng,
) -> MomentPair:
    """Moments averaged over the channel-estimation error.

    Entries that involve only high-resolution antennas have exact
    expectations (the error is zero mean and independent across antennas):

        r_rx[n]    = h_hat[n] es
        r_rr[n,n]  = 1 + (|h_hat[n]|^2 + sigma_t_sq) es
        r_rr[n,m]  = h_hat[n] h_hat[m]* es

    Entries involving a one-bit antenna are sample means over
    ``err_samples`` error draws. Mixed high/one-bit entries factor across
    antennas, so they only need the per-antenna mean of the shrunk gain;
    one-bit pairs need the joint average of the arcsine expression. The
    assembled covariance is Hermitian-symmetrized. With sigma_t_sq = 0 the
    result is identical to the perfect-CSI moments.
    """
    h_hat = np.asarray(est.h_hat, dtype=complex)
    n = h_hat.shape[0]
    delta = validate_switch(delta, n)
    if est.sigma_t_sq == 0.0:
        return build_moments(h_hat, delta, es)
    if err_samples < 1:
        raise ValueError("need at least one error sample")

    one_bit = ~delta
    n_ob = int(one_bit.sum())
    gen = rng.generator()

    # exact high-resolution pieces
    r_rx = h_hat * es
    r_rr = np.outer(h_hat, h_hat.conj()) * es
    diag = 1.0 + (np.abs(h_hat) ** 2 + est.sigma_t_sq) * es

    if n_ob > 0:
        shrunk_mean = np.zeros(n_ob, dtype=complex)
        block_sum = np.zeros((n_ob, n_ob), dtype=complex)
        # block chunking keeps the per-chunk pair tensor around 32 MB
        chunk = max(1, (1 << 21) // max(1, n_ob * n_ob))
        done = 0
        while done < err_samples:
            size = min(chunk, err_samples - done)
            err = complex_normal(gen, (size, n_ob), est.sigma_t_sq)
            hs = h_hat[one_bit][None, :] + err
            power = np.abs(hs) ** 2 * es
            denom = power + 1.0
            shrunk_mean += (hs * np.sqrt(4.0 / (np.pi * denom))).sum(axis=0)
            scaled = hs * np.sqrt(es / denom)
            pair = scaled[:, :, None] * scaled[:, None, :].conj()
            block_sum += (
                clipped_arcsin(pair.real) + 1j * clipped_arcsin(pair.imag)
            ).sum(axis=0)
            done += size
        shrunk_mean /= err_samples
        block = (4.0 / np.pi) * block_sum / err_samples

        r_rx[one_bit] = shrunk_mean * es
        hi_idx = np.flatnonzero(delta)
        ob_idx = np.flatnonzero(one_bit)
        r_rr[np.ix_(hi_idx, ob_idx)] = np.outer(h_hat[hi_idx], shrunk_mean.conj()) * es
        r_rr[np.ix_(ob_idx, hi_idx)] = np.outer(shrunk_mean, h_hat[hi_idx].conj()) * es
        r_rr[np.ix_(ob_idx, ob_idx)] = block
        diag[one_bit] = 2.0

    np.fill_diagonal(r_rr, diag)
    r_rr = 0.5 * (r_rr + r_rr.conj().T)
    return MomentPair(r_rx=r_rx, r_rr=r_rr, es=float(es))


def imperfect_bounds(
    n: int,
    k: int,
    es: float,
    sigma_t_sq: float,
    err_samples: int,
    trials: int,
    rng: Rng,
    training: TrainingConfig | None = None,
    workers: int = 1,
) -> ErgodicBounds:
    """Ergodic sandwich under imperfect CSI, scaled by the training prefactor.

    The switch pattern and combiner are designed from the estimate alone.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if training is None:
        training = TrainingConfig()
    prefactor = training_prefactor(n, k, training)

    def one_trial(i: int):
        sub = rng.substream(i)
        rejects = 0
        for attempt in range(_MAX_REDRAWS):
            est, _ = draw_estimated(n, sigma_t_sq, sub.substream(2 * attempt))
            delta = switch_strongest(est.h_hat, k)
            moments = imperfect_moments(
                est, delta, es, err_samples, sub.substream(2 * attempt + 1)
            )
            try:
                return kappa_opt(moments).kappa, rejects
            except NotPositiveDefinite:
                rejects += 1
        raise RuntimeError(f"trial {i}: {rejects} consecutive draws rejected")

    results = map_trials(one_trial, trials, workers)
    kappas = np.array([r[0] for r in results])
    rejected = sum(r[1] for r in results)
    _check_rejections(rejected, trials)
    gmis = -np.log1p(-kappas)
    raw = _reduce_kappas(kappas, gmis, trials, rejected)
    return ErgodicBounds(
        lower_nats=prefactor * raw.lower_nats,
        upper_nats=prefactor * raw.upper_nats,
        stderr_lower=prefactor * raw.stderr_lower,
        stderr_upper=prefactor * raw.stderr_upper,
        trials=trials,
        rejected=rejected,
    )
