"""Achievable-rate toolkit for uplinks with mixed-resolution ADC front ends.

A receiver with n antennas converts k of them with full-resolution ADC
pairs and the remaining n - k with one-bit pairs. The package computes the
achievable rate of that receiver in closed form, checks it against a
Monte Carlo oracle, and sweeps it over fading, CSI quality, dithering,
user counts, and power budgets.
"""

from .asymptotics import (
    HighSnrComponents,
    SingularLimitMatrix,
    ZeroGainOneBitAntenna,
    high_snr_components,
    low_snr_slope,
    one_bit_high_snr_limit,
    one_bit_saturation,
)
from .channel import (
    EstimatedChannel,
    Rng,
    draw_estimated,
    draw_rayleigh,
    load_channel,
    switch_strongest,
)
from .dithering import DitherPolicy, dithered_moments, optimize_threshold
from .energy import EfficiencyPoint, PowerModel, efficiency_curve, receiver_power
from .ergodic import (
    ErgodicBounds,
    TrainingConfig,
    ergodic_bounds,
    imperfect_bounds,
    imperfect_moments,
    training_prefactor,
)
from .gmi import (
    GmiResult,
    MomentPair,
    ZeroCombiner,
    build_moments,
    build_r_rr,
    build_r_rx,
    capacity_antenna_selection,
    capacity_conventional,
    kappa_given_w,
    kappa_opt,
)
from .linalg import NotPositiveDefinite, clipped_arcsin, hermitian_solve, quadratic_form
from .multiuser import (
    MuGmiResult,
    MuMomentPair,
    build_mu_moments,
    mu_antenna_selection_baseline,
    mu_ergodic_bounds,
    mu_kappa,
    mu_low_snr_slope,
    switch_norm_based,
    switch_random,
)
from .oracle import (
    estimate_kappa_mc,
    estimate_lemma1,
    estimate_lemma2,
    estimate_moments_mc,
    estimate_mu_kappa_mc,
    estimate_mu_moments_mc,
)
from .outage import OutagePoint, lower_tail_quantile, outage_gmi
from .validate import BatteryRow, regression_battery

__version__ = "0.1.0"
