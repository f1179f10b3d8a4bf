import math

import numpy as np
import pytest

from mixedadc.channel import Rng
from mixedadc.gmi import build_moments, kappa_opt
from mixedadc.multiuser import build_mu_moments, mu_kappa
from mixedadc.oracle import (
    complex_sign,
    estimate_kappa_mc,
    estimate_lemma1,
    estimate_lemma2,
    estimate_moments_mc,
    estimate_mu_kappa_mc,
    estimate_mu_moments_mc,
)


def test_complex_sign_convention():
    u = np.array([0.0 + 0.0j, 1.0 - 1.0j, -0.5 + 0.0j, -2.0 - 3.0j])
    out = complex_sign(u)
    # sgn(0) = +1 in each component
    np.testing.assert_array_equal(
        out, np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j], dtype=complex)
    )


def test_lemma1_frozen_values():
    est = estimate_lemma1(0.5, 400000, Rng(51))
    assert abs(est.value - 1.0 / 3.0) <= 3.5 * est.stderr
    est0 = estimate_lemma1(0.0, 400000, Rng(52))
    assert abs(est0.value) <= 3.5 * est0.stderr
    # rho = 1 makes the two signs identical, with zero variance
    est1 = estimate_lemma1(1.0, 1000, Rng(53))
    assert est1.value == 1.0
    assert est1.stderr == 0.0


def test_lemma1_rejects_bad_correlation():
    with pytest.raises(ValueError):
        estimate_lemma1(1.5, 100, Rng(1))


def test_lemma2_frozen_values():
    est = estimate_lemma2(2.0, 0.0, 200000, Rng(54))
    closed = 2.0 * math.sqrt(2.0 / math.pi)
    assert abs(est.value - closed) <= 3.5 * est.stderr
    assert abs(est.value.imag) <= 3.5 * est.stderr
    zero = estimate_lemma2(0.0, 1.0, 1000, Rng(55))
    assert zero.value == 0.0 and zero.stderr == 0.0
    with pytest.raises(ValueError):
        estimate_lemma2(-1.0, 1.0, 100, Rng(1))


def test_kappa_estimates_hit_known_values():
    h = np.array([1.0 + 0j])
    w = np.array([1.0 + 0j])
    est = estimate_kappa_mc(h, np.array([True]), 1.0, w, 200000, Rng(56))
    assert abs(est.kappa - 0.5) <= 4.0 * est.stderr
    est = estimate_kappa_mc(h, np.array([False]), 1.0, w, 200000, Rng(57))
    assert abs(est.kappa - 1.0 / math.pi) <= 4.0 * est.stderr


def test_kappa_estimate_scale_invariant_and_deterministic():
    h = np.array([0.8 + 0.1j, -0.2 + 1.1j])
    delta = np.array([True, False])
    w = kappa_opt(build_moments(h, delta, 2.0)).combiner
    a = estimate_kappa_mc(h, delta, 2.0, w, 50000, Rng(58))
    b = estimate_kappa_mc(h, delta, 2.0, 7j * w, 50000, Rng(58))
    assert b.kappa == pytest.approx(a.kappa, rel=1e-12)
    c = estimate_kappa_mc(h, delta, 2.0, w, 50000, Rng(58))
    assert c.kappa == a.kappa and c.stderr == a.stderr


def test_stderr_shrinks_like_root_samples():
    h = np.array([0.8 + 0.1j, -0.2 + 1.1j])
    delta = np.array([False, False])
    w = kappa_opt(build_moments(h, delta, 1.0)).combiner
    small = estimate_kappa_mc(h, delta, 1.0, w, 100000, Rng(59))
    big = estimate_kappa_mc(h, delta, 1.0, w, 400000, Rng(59))
    assert small.stderr / big.stderr == pytest.approx(2.0, abs=0.4)


def test_moment_estimates_cover_closed_forms():
    h = np.array([1.5 + 0j, 0.3 - 0.8j, -1.0 + 0.2j])
    delta = np.array([True, False, False])
    closed = build_moments(h, delta, 0.7)
    est = estimate_moments_mc(h, delta, 0.7, 300000, Rng(60))
    assert est.samples == 300000
    assert np.all(np.abs(est.r_rx - closed.r_rx) <= 4.0 * est.r_rx_se + 1e-12)
    assert np.all(np.abs(est.r_rr - closed.r_rr) <= 4.0 * est.r_rr_se + 1e-12)


def test_multi_user_estimates_cover_closed_forms():
    gen = Rng(61).generator()
    hh = (gen.standard_normal((2, 3)) + 1j * gen.standard_normal((2, 3))) / np.sqrt(2.0)
    delta = np.array([False, True, False])
    closed = build_mu_moments(hh, delta, 1.3)
    result = mu_kappa(hh, delta, 1.3)
    est = estimate_mu_kappa_mc(
        hh, delta, 1.3, 1, result.combiners[:, 1], 300000, Rng(62)
    )
    assert abs(est.kappa - result.kappas[1]) <= 4.0 * est.stderr
    mom = estimate_mu_moments_mc(hh, delta, 1.3, 300000, Rng(63))
    assert np.all(np.abs(mom.r_rx - closed.r_rx) <= 4.0 * mom.r_rx_se + 1e-12)
    assert np.all(np.abs(mom.r_rr - closed.r_rr) <= 4.0 * mom.r_rr_se + 1e-12)


def test_silent_user_estimates_to_zero():
    hh = np.array([[0.0 + 0j, 0.0 + 0j], [1.0 + 0j, -0.5 + 0.5j]])
    delta = np.array([False, False])
    w = np.array([1.0 + 0j, 1.0 + 0j])
    est = estimate_mu_kappa_mc(hh, delta, 1.0, 0, w, 100000, Rng(64))
    assert abs(est.kappa) <= 3.5 * est.stderr + 1e-9
