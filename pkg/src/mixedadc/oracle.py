"""Monte Carlo estimators that check the closed forms by direct sampling.

Everything here simulates the physical chain explicitly: draw the symbol
and noise, push them through the antennas and the one-bit clippers, apply
the combiner, and average. No closed-form moment ever enters an estimate,
so agreement between the two paths is evidence, not circularity.

The complex sign convention is sgn(u) = sgn(Re u) + i sgn(Im u) with
sgn(0) = +1 in each component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Rng, complex_normal, validate_switch
from .dithering import DitherPolicy, noise_variances

__all__ = [
    "KappaEstimate",
    "MomentEstimate",
    "ScalarEstimate",
    "complex_sign",
    "estimate_kappa_mc",
    "estimate_moments_mc",
    "estimate_mu_kappa_mc",
    "estimate_mu_moments_mc",
    "estimate_lemma1",
    "estimate_lemma2",
]

# Fixed accumulation chunk; results depend on it only through draw order,
# so it must never become a tunable.
_CHUNK = 1 << 16


@dataclass(frozen=True)
class KappaEstimate:
    kappa: float
    stderr: float
    samples: int


@dataclass(frozen=True)
class MomentEstimate:
    """Entrywise sample means and standard errors of both moments.

    Standard errors combine the real and imaginary parts,
    sqrt((var Re + var Im) / samples), one value per entry.
    """

    r_rx: np.ndarray
    r_rx_se: np.ndarray
    r_rr: np.ndarray
    r_rr_se: np.ndarray
    samples: int


@dataclass(frozen=True)
class ScalarEstimate:
    value: complex
    stderr: float
    samples: int


def complex_sign(u: np.ndarray) -> np.ndarray:
    """Per-component one-bit clipper with sgn(0) = +1."""
    return np.where(u.real >= 0.0, 1.0, -1.0) + 1j * np.where(u.imag >= 0.0, 1.0, -1.0)


def _chunks(total: int):
    done = 0
    while done < total:
        size = min(_CHUNK, total - done)
        yield size
        done += size


def _simulate_outputs(gen, size, hh, delta, es, noise_var):
    """One chunk of the physical chain for an (m, n) channel matrix.

    Returns the symbol block (size, m) and quantized outputs (size, n).
    """
    m, n = hh.shape
    x = complex_normal(gen, (size, m), es)
    z = complex_normal(gen, (size, n), noise_var)
    y = x @ hh + z
    r = np.where(delta, y, complex_sign(y))
    return x, r


def estimate_kappa_mc(
    h: np.ndarray,
    delta: np.ndarray,
    es: float,
    w: np.ndarray,
    samples: int,
    rng: Rng,
    dither: DitherPolicy | None = None,
) -> KappaEstimate:
    """Plug-in estimate of kappa for a fixed combiner.

    kappa_hat = |mean(f* x)|^2 / (es mean |f|^2) with f = w^H r. The
    standard error comes from the delta method on the three averaged
    statistics (Re f* x, Im f* x, |f|^2).
    """
    h = np.asarray(h, dtype=complex)
    delta = validate_switch(delta, h.shape[0])
    w = np.asarray(w, dtype=complex)
    noise_var = noise_variances(h, delta, es, dither)
    gen = rng.generator()

    sum_u = np.zeros(3)
    sum_uu = np.zeros((3, 3))
    for size in _chunks(samples):
        x, r = _simulate_outputs(gen, size, h[None, :], delta, es, noise_var)
        f = r @ w.conj()
        cross = f.conj() * x[:, 0]
        u = np.stack([cross.real, cross.imag, np.abs(f) ** 2])
        sum_u += u.sum(axis=1)
        sum_uu += u @ u.T
    mean_u = sum_u / samples
    cov_u = sum_uu / samples - np.outer(mean_u, mean_u)
    a_re, a_im, b = mean_u
    kappa = (a_re**2 + a_im**2) / (es * b)
    grad = np.array([2.0 * a_re / (es * b), 2.0 * a_im / (es * b), -kappa / b])
    var = float(grad @ cov_u @ grad) / samples
    return KappaEstimate(kappa=float(kappa), stderr=float(np.sqrt(max(var, 0.0))), samples=samples)


def estimate_mu_kappa_mc(
    hh: np.ndarray,
    delta: np.ndarray,
    es_per_user: float,
    user: int,
    w: np.ndarray,
    samples: int,
    rng: Rng,
) -> KappaEstimate:
    """Multi-user counterpart of estimate_kappa_mc for one target user."""
    hh = np.asarray(hh, dtype=complex)
    m, n = hh.shape
    delta = validate_switch(delta, n)
    w = np.asarray(w, dtype=complex)
    gen = rng.generator()

    sum_u = np.zeros(3)
    sum_uu = np.zeros((3, 3))
    for size in _chunks(samples):
        x, r = _simulate_outputs(gen, size, hh, delta, es_per_user, np.ones(n))
        f = r @ w.conj()
        cross = f.conj() * x[:, user]
        u = np.stack([cross.real, cross.imag, np.abs(f) ** 2])
        sum_u += u.sum(axis=1)
        sum_uu += u @ u.T
    mean_u = sum_u / samples
    cov_u = sum_uu / samples - np.outer(mean_u, mean_u)
    a_re, a_im, b = mean_u
    kappa = (a_re**2 + a_im**2) / (es_per_user * b)
    grad = np.array(
        [2.0 * a_re / (es_per_user * b), 2.0 * a_im / (es_per_user * b), -kappa / b]
    )
    var = float(grad @ cov_u @ grad) / samples
    return KappaEstimate(kappa=float(kappa), stderr=float(np.sqrt(max(var, 0.0))), samples=samples)


def _accumulate_moments(gen, samples, hh, delta, es, noise_var):
    m, n = hh.shape
    sum_rx = np.zeros((n, m), dtype=complex)
    sumsq_rx = np.zeros((n, m))
    sum_rr = np.zeros((n, n), dtype=complex)
    sumsq_rr = np.zeros((n, n))
    for size in _chunks(samples):
        x, r = _simulate_outputs(gen, size, hh, delta, es, noise_var)
        cross = np.einsum("sn,sm->nm", r, x.conj())
        sum_rx += cross
        prod = r[:, :, None] * r[:, None, :].conj()
        sum_rr += prod.sum(axis=0)
        # second moments of the real and imaginary parts, for standard errors
        per = r[:, :, None] * x[:, None, :].conj()
        sumsq_rx += (per.real**2 + per.imag**2).sum(axis=0)
        sumsq_rr += (prod.real**2 + prod.imag**2).sum(axis=0)
    mean_rx = sum_rx / samples
    mean_rr = sum_rr / samples
    # var Re + var Im = E|u|^2 - |E u|^2
    var_rx = np.maximum(sumsq_rx / samples - np.abs(mean_rx) ** 2, 0.0)
    var_rr = np.maximum(sumsq_rr / samples - np.abs(mean_rr) ** 2, 0.0)
    return (
        mean_rx,
        np.sqrt(var_rx / samples),
        mean_rr,
        np.sqrt(var_rr / samples),
    )


def estimate_moments_mc(
    h: np.ndarray,
    delta: np.ndarray,
    es: float,
    samples: int,
    rng: Rng,
    dither: DitherPolicy | None = None,
) -> MomentEstimate:
    """Entrywise sample estimates of E[r x*] and E[r r^H]."""
    h = np.asarray(h, dtype=complex)
    delta = validate_switch(delta, h.shape[0])
    noise_var = noise_variances(h, delta, es, dither)
    gen = rng.generator()
    rx, rx_se, rr, rr_se = _accumulate_moments(
        gen, samples, h[None, :], delta, es, noise_var
    )
    return MomentEstimate(
        r_rx=rx[:, 0], r_rx_se=rx_se[:, 0], r_rr=rr, r_rr_se=rr_se, samples=samples
    )


def estimate_mu_moments_mc(
    hh: np.ndarray,
    delta: np.ndarray,
    es_per_user: float,
    samples: int,
    rng: Rng,
) -> MomentEstimate:
    """Multi-user moment estimates; r_rx has one column per user."""
    hh = np.asarray(hh, dtype=complex)
    delta = validate_switch(delta, hh.shape[1])
    gen = rng.generator()
    rx, rx_se, rr, rr_se = _accumulate_moments(
        gen, samples, hh, delta, es_per_user, np.ones(hh.shape[1])
    )
    return MomentEstimate(r_rx=rx, r_rx_se=rx_se, r_rr=rr, r_rr_se=rr_se, samples=samples)


def estimate_lemma1(rho: float, samples: int, rng: Rng) -> ScalarEstimate:
    """Sample E[sgn(S) sgn(T)] for unit real Gaussians with correlation rho.

    The closed form it checks is (2/pi) arcsin(rho).
    """
    if not -1.0 <= rho <= 1.0:
        raise ValueError("correlation must lie in [-1, 1]")
    gen = rng.generator()
    total = 0.0
    total_sq = 0.0
    tail = np.sqrt(max(1.0 - rho**2, 0.0))
    for size in _chunks(samples):
        s = gen.standard_normal(size)
        t = rho * s + tail * gen.standard_normal(size)
        prod = np.where(s >= 0.0, 1.0, -1.0) * np.where(t >= 0.0, 1.0, -1.0)
        total += prod.sum()
        total_sq += (prod**2).sum()
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    return ScalarEstimate(value=mean, stderr=float(np.sqrt(var / samples)), samples=samples)


def estimate_lemma2(var_s: float, var_t: float, samples: int, rng: Rng) -> ScalarEstimate:
    """Sample E[S* sgn(S + T)] for independent complex Gaussians.

    The closed form it checks is var_s * sqrt(4 / (pi (var_s + var_t))).
    """
    if var_s < 0.0 or var_t < 0.0:
        raise ValueError("variances must be nonnegative")
    gen = rng.generator()
    total = 0.0 + 0.0j
    total_sq = 0.0
    for size in _chunks(samples):
        s = complex_normal(gen, size, var_s)
        t = complex_normal(gen, size, var_t)
        val = s.conj() * complex_sign(s + t)
        total += val.sum()
        total_sq += (val.real**2 + val.imag**2).sum()
    mean = total / samples
    var = max(total_sq / samples - abs(mean) ** 2, 0.0)
    return ScalarEstimate(value=complex(mean), stderr=float(np.sqrt(var / samples)), samples=samples)
