"""Outage rates: lower-tail quantiles of the per-draw rate distribution."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Rng, complex_normal, switch_strongest
from .gmi import build_moments, kappa_opt
from .parallel import map_trials

__all__ = ["OutagePoint", "lower_tail_quantile", "outage_gmi"]


@dataclass(frozen=True)
class OutagePoint:
    """Rates in nats that each architecture sustains with probability
    1 - p_out over the fading."""

    mixed_nats: float
    conventional_nats: float
    selection_nats: float
    p_out: float
    draws: int


def lower_tail_quantile(values: np.ndarray, p_out: float) -> float:
    """Empirical quantile by order statistic: the ceil(p_out * len)-th
    smallest value."""
    values = np.sort(np.asarray(values, dtype=float))
    if values.shape[0] < 1:
        raise ValueError("need at least one value")
    if not 0.0 < p_out < 1.0:
        raise ValueError("p_out must lie strictly between 0 and 1")
    idx = math.ceil(p_out * values.shape[0]) - 1
    return float(values[max(idx, 0)])


def outage_gmi(
    n: int,
    k: int,
    es: float,
    p_out: float,
    draws: int,
    rng: Rng,
    workers: int = 1,
) -> OutagePoint:
    """Outage rates of the three architectures on common channel draws."""
    if draws < 1:
        raise ValueError("need at least one draw")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}]")
    if not 0.0 < p_out < 1.0:
        raise ValueError("p_out must lie strictly between 0 and 1")

    def one_draw(i: int):
        h = complex_normal(rng.substream(i).generator(), n)
        gains = np.abs(h) ** 2
        delta = switch_strongest(h, k)
        mixed = kappa_opt(build_moments(h, delta, es)).gmi_nats
        conventional = float(np.log1p(es * gains.sum()))
        selection = float(np.log1p(es * gains[delta].sum()))
        return mixed, conventional, selection

    rates = np.array(map_trials(one_draw, draws, workers))
    return OutagePoint(
        mixed_nats=lower_tail_quantile(rates[:, 0], p_out),
        conventional_nats=lower_tail_quantile(rates[:, 1], p_out),
        selection_nats=lower_tail_quantile(rates[:, 2], p_out),
        p_out=p_out,
        draws=draws,
    )
