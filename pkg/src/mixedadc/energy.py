"""Receiver power models and rate-versus-energy tradeoff curves.

Three front-end architectures share the same RF chain components and differ
in how many full-rate converter pairs they power:

    conventional       n full chains, n converter pairs
    antenna_selection  k full chains, k converter pairs (rest dark)
    mixed              n full chains, k converter pairs (rest one-bit)

One-bit converter pairs draw negligible power and are not charged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Rng, complex_normal, switch_strongest
from .gmi import build_moments, kappa_opt
from .multiuser import mu_antenna_selection_baseline, mu_kappa, switch_norm_based
from .parallel import map_trials

__all__ = [
    "PowerModel",
    "EfficiencyPoint",
    "ARCHITECTURES",
    "receiver_power",
    "efficiency_curve",
]

ARCHITECTURES = ("conventional", "antenna_selection", "mixed")


@dataclass(frozen=True)
class PowerModel:
    """Per-component draw in mW.

    adc_pair_mw covers the in-phase and quadrature converters of one chain.
    """

    lna_mw: float = 20.0
    mixer_mw: float = 21.0
    filters_mw: float = 5.0
    adc_pair_mw: float = 234.0
    synthesizer_mw: float = 67.5

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if value < 0.0:
                raise ValueError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class EfficiencyPoint:
    """Rate and power of one architecture at one k, both normalized to the
    conventional receiver on the same channel draws."""

    k: int
    arch: str
    norm_rate: float
    norm_energy: float


def receiver_power(n: int, k: int, arch: str, model: PowerModel) -> float:
    """Total receiver power in mW for an architecture at array size n."""
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}]")
    chain = model.lna_mw + model.mixer_mw + model.filters_mw
    if arch == "conventional":
        return n * (chain + model.adc_pair_mw) + model.synthesizer_mw
    if arch == "antenna_selection":
        return k * (chain + model.adc_pair_mw) + model.synthesizer_mw
    if arch == "mixed":
        return n * chain + k * model.adc_pair_mw + model.synthesizer_mw
    raise ValueError(f"unknown architecture {arch!r}, expected one of {ARCHITECTURES}")


def efficiency_curve(
    n: int,
    k_grid,
    es: float,
    trials: int,
    rng: Rng,
    model: PowerModel | None = None,
    m: int = 1,
    workers: int = 1,
) -> list[EfficiencyPoint]:
    """Normalized rate and energy of mixed and selection receivers over k.

    All k values and both architectures are evaluated on the same channel
    draws, so the rate ratios are paired comparisons. Rates are ergodic
    lower bounds (exact ergodic capacity for the single-user conventional
    and selection baselines); m > 1 switches every term to the multi-user
    sum-rate counterpart at per-user energy es / m.
    """
    if model is None:
        model = PowerModel()
    k_grid = [int(k) for k in k_grid]
    if any(not 0 <= k <= n for k in k_grid):
        raise ValueError(f"every k must lie in [0, {n}]")
    if trials < 1:
        raise ValueError("need at least one trial")

    if m == 1:
        def one_trial(i: int):
            h = complex_normal(rng.substream(i).generator(), n)
            conv = float(np.log1p(es * np.sum(np.abs(h) ** 2)))
            mixed = np.empty(len(k_grid))
            select = np.empty(len(k_grid))
            for j, k in enumerate(k_grid):
                delta = switch_strongest(h, k)
                mixed[j] = kappa_opt(build_moments(h, delta, es)).kappa
                select[j] = float(np.log1p(es * np.sum(np.abs(h[delta]) ** 2)))
            return conv, mixed, select
    else:
        es_user = es / m

        def one_trial(i: int):
            hh = complex_normal(rng.substream(i).generator(), (m, n))
            conv = float(mu_kappa(hh, np.ones(n, dtype=bool), es_user).kappas.mean())
            mixed = np.empty(len(k_grid))
            select = np.empty(len(k_grid))
            for j, k in enumerate(k_grid):
                mixed[j] = float(mu_kappa(hh, switch_norm_based(hh, k), es_user).kappas.mean())
                if k >= 1:
                    select[j] = float(
                        mu_antenna_selection_baseline(hh, k, es_user).kappas.mean()
                    )
                else:
                    select[j] = 0.0
            return conv, mixed, select

    results = map_trials(one_trial, trials, workers)
    conv = np.array([r[0] for r in results])
    mixed = np.stack([r[1] for r in results])
    select = np.stack([r[2] for r in results])

    if m == 1:
        conv_rate = float(conv.mean())
        mixed_rate = -np.log1p(-mixed.mean(axis=0))
        select_rate = select.mean(axis=0)
    else:
        conv_rate = float(-np.log1p(-conv.mean()))
        mixed_rate = -np.log1p(-mixed.mean(axis=0))
        select_rate = -np.log1p(-np.clip(select.mean(axis=0), 0.0, None))
        select_rate[np.array(k_grid) == 0] = 0.0

    power_conv = receiver_power(n, n, "conventional", model)
    points = []
    for j, k in enumerate(k_grid):
        points.append(
            EfficiencyPoint(
                k=k,
                arch="mixed",
                norm_rate=float(mixed_rate[j] / conv_rate),
                norm_energy=receiver_power(n, k, "mixed", model) / power_conv,
            )
        )
        points.append(
            EfficiencyPoint(
                k=k,
                arch="antenna_selection",
                norm_rate=float(select_rate[j] / conv_rate),
                norm_energy=receiver_power(n, k, "antenna_selection", model) / power_conv,
            )
        )
    return points
