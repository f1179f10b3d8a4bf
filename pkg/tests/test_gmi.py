import itertools
import math

import numpy as np
import pytest

from mixedadc.channel import Rng, complex_normal
from mixedadc.gmi import (
    ZeroCombiner,
    build_moments,
    build_r_rr,
    build_r_rx,
    capacity_antenna_selection,
    capacity_conventional,
    gmi_from_kappa,
    kappa_given_w,
    kappa_opt,
)
from mixedadc.linalg import cholesky_pd
from mixedadc.oracle import estimate_kappa_mc, estimate_moments_mc
from mixedadc.parallel import map_trials


def _ones(n):
    return np.ones(n, dtype=bool)


def _zeros(n):
    return np.zeros(n, dtype=bool)


def test_r_rx_high_res_entry_is_linear():
    out = build_r_rx(np.array([1.0 + 0j]), _ones(1), 1.0)
    assert out[0] == 1.0 + 0j


def test_r_rx_one_bit_entry_shrinks():
    out = build_r_rx(np.array([1.0 + 0j]), _zeros(1), 1.0)
    # per-antenna denominator |h|^2 es + 1 = 2
    assert out[0] == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-15)
    assert out[0].real == pytest.approx(0.7978845608028654, abs=1e-15)


def test_r_rx_mixed_pair_uses_per_antenna_gain():
    # each one-bit entry shrinks by its own |h_n|^2 es + 1, not the array norm
    h = np.array([2.0 + 0j, 1j])
    out = build_r_rx(h, np.array([True, False]), 1.0)
    assert out[0] == 2.0 + 0j
    assert out[1] == pytest.approx(1j * math.sqrt(2.0 / math.pi), rel=1e-15)


def test_mixed_pair_moments_match_sampling():
    # direct Monte Carlo confirmation of the per-antenna denominator
    h = np.array([2.0 + 0j, 1j])
    delta = np.array([True, False])
    closed = build_moments(h, delta, 1.0)
    est = estimate_moments_mc(h, delta, 1.0, 250000, Rng(31))
    assert np.all(np.abs(est.r_rx - closed.r_rx) <= 4.0 * est.r_rx_se + 1e-12)
    assert np.all(np.abs(est.r_rr - closed.r_rr) <= 4.0 * est.r_rr_se + 1e-12)


def test_r_rr_one_bit_diagonal_is_two():
    for es in (0.01, 1.0, 1e4):
        r = build_r_rr(np.array([3.0 - 4j]), _zeros(1), es)
        assert r[0, 0] == 2.0
    # mixed array keeps 1 + |h|^2 es on the high-resolution entries
    r = build_r_rr(np.array([2.0 + 0j, 1j, 0.5 + 0j]), np.array([True, False, True]), 1.0)
    assert r[0, 0] == pytest.approx(5.0, rel=1e-15)
    assert r[1, 1] == 2.0
    assert r[2, 2] == pytest.approx(1.25, rel=1e-15)


def test_r_rr_all_high_res_is_identity_plus_outer():
    r = build_r_rr(np.array([1.0 + 0j, 1.0 + 0j]), _ones(2), 1.0)
    np.testing.assert_allclose(r, np.array([[2.0, 1.0], [1.0, 2.0]]), rtol=1e-15)


def test_r_rr_one_bit_pair_saturates_at_two():
    r = build_r_rr(np.array([1.0 + 0j, 1.0 + 0j]), _zeros(2), 1e12)
    assert r[0, 0] == 2.0 and r[1, 1] == 2.0
    assert r[0, 1] == pytest.approx(2.0, abs=1e-5)


def test_r_rr_hermitian_and_positive_definite():
    gen = Rng(11).generator()
    for n in (1, 2, 4, 7):
        for es in (0.05, 1.0, 40.0):
            h = complex_normal(gen, n)
            delta = gen.random(n) < 0.5
            r = build_r_rr(h, delta, es)
            assert np.allclose(r, r.conj().T, atol=1e-15)
            assert np.all(np.isreal(np.diagonal(r)))
            cholesky_pd(r)  # raises if any pivot is not positive


def test_kappa_given_w_frozen_single_antenna():
    m = build_moments(np.array([1.0 + 0j]), _ones(1), 1.0)
    assert kappa_given_w(np.array([1.0 + 0j]), m) == pytest.approx(0.5, rel=1e-15)


def test_kappa_given_w_scale_invariant():
    gen = Rng(12).generator()
    h = complex_normal(gen, 4)
    m = build_moments(h, np.array([True, False, True, False]), 2.0)
    w = complex_normal(gen, 4)
    base = kappa_given_w(w, m)
    assert kappa_given_w(7j * w, m) == pytest.approx(base, rel=1e-12)


def test_zero_combiner_rejected():
    m = build_moments(np.array([1.0 + 0j]), _ones(1), 1.0)
    with pytest.raises(ZeroCombiner):
        kappa_given_w(np.array([0.0 + 0j]), m)


def test_kappa_opt_reduces_to_mrc_when_all_high_res():
    h = np.array([1.0 + 0j, 1.0 + 0j])
    result = kappa_opt(build_moments(h, _ones(2), 1.0))
    assert result.kappa == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert result.gmi_nats == pytest.approx(math.log(3.0), rel=1e-14)
    assert result.gmi_nats == pytest.approx(capacity_conventional(h, 1.0), rel=1e-14)
    # the optimal combiner is proportional to the channel
    ratio = result.combiner / h
    assert np.allclose(ratio, ratio[0], rtol=1e-12)


def test_kappa_opt_frozen_one_bit_single_antenna():
    result = kappa_opt(build_moments(np.array([1.0 + 0j]), _zeros(1), 1.0))
    assert result.kappa == pytest.approx(1.0 / math.pi, rel=1e-14)
    assert result.gmi_nats == pytest.approx(0.3831801029685058, abs=1e-13)


def test_kappa_opt_scale_equals_kappa_and_w_is_optimal():
    gen = Rng(13).generator()
    for n in (1, 3, 5):
        h = complex_normal(gen, n)
        delta = gen.random(n) < 0.5
        m = build_moments(h, delta, 1.5)
        result = kappa_opt(m)
        assert 0.0 < result.kappa < 1.0
        assert result.gmi_nats == gmi_from_kappa(result.kappa)
        assert abs(result.scale - result.kappa) <= 1e-12
        assert kappa_given_w(result.combiner, m) == pytest.approx(result.kappa, rel=1e-12)


def test_no_combiner_beats_the_optimum():
    gen = Rng(14).generator()
    for _ in range(10):
        n = int(gen.integers(1, 7))
        h = complex_normal(gen, n)
        delta = gen.random(n) < 0.5
        m = build_moments(h, delta, float(gen.uniform(0.1, 10.0)))
        best = kappa_opt(m).kappa
        for _ in range(100):
            w = complex_normal(gen, n)
            assert kappa_given_w(w, m) <= best + 1e-10


def test_gmi_monotone_in_nested_switch():
    gen = Rng(15).generator()
    for _ in range(20):
        n = int(gen.integers(2, 8))
        h = complex_normal(gen, n)
        order = np.argsort(-np.abs(h), kind="stable")
        prev = -1.0
        for k in range(n + 1):
            delta = np.zeros(n, dtype=bool)
            delta[order[:k]] = True
            gmi = kappa_opt(build_moments(h, delta, 1.0)).gmi_nats
            assert gmi >= prev - 1e-12
            prev = gmi


def test_capacity_baselines():
    h = np.array([1.0 + 0j, 1.0 + 0j])
    assert capacity_conventional(h, 1.0) == pytest.approx(math.log(3.0), rel=1e-15)
    assert capacity_antenna_selection(h, 2, 1.0) == pytest.approx(
        capacity_conventional(h, 1.0), rel=1e-15
    )
    assert capacity_antenna_selection(h, 0, 1.0) == 0.0
    h2 = np.array([3.0 + 0j, 1.0 + 0j])
    assert capacity_antenna_selection(h2, 1, 2.0) == pytest.approx(math.log(19.0), rel=1e-15)


def test_symbol_energy_must_be_positive():
    h = np.array([1.0 + 0j])
    for es in (0.0, -1.0):
        with pytest.raises(ValueError):
            build_moments(h, _ones(1), es)
        with pytest.raises(ValueError):
            capacity_conventional(h, es)


def test_oracle_equivalence_exhaustive():
    # every switch pattern up to n = 6, three symbol energies, one million
    # samples each; the closed-form kappa must sit within three standard
    # errors of the sampled estimate on all 378 cases
    cases = []
    for n in range(1, 7):
        for bits in itertools.product((0, 1), repeat=n):
            for es in (0.01, 1.0, 100.0):
                cases.append((n, bits, es))
    assert len(cases) == 378
    rng = Rng(1)

    def run(i):
        n, bits, es = cases[i]
        sub = rng.substream(5000 + i)
        h = complex_normal(sub.substream(0).generator(), n)
        delta = np.array(bits, dtype=bool)
        closed = kappa_opt(build_moments(h, delta, es))
        est = estimate_kappa_mc(h, delta, es, closed.combiner, 10**6, sub.substream(1))
        return abs(est.kappa - closed.kappa) / est.stderr

    zs = map_trials(run, len(cases), 4)
    worst = max(zs)
    assert np.isfinite(worst)
    assert worst <= 3.0, f"worst z = {worst:.3f} at case {int(np.argmax(zs))}"
