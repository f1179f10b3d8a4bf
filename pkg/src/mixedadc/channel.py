"""Channel models, ADC switch patterns, and reproducible random streams.

A single-input multiple-output channel is a 1-D complex ndarray ``h`` of
per-antenna gains. The ADC switch is a boolean ndarray ``delta`` of the same
length: True marks an antenna wired to the high-resolution converter pair,
False marks a one-bit pair.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Rng",
    "EstimatedChannel",
    "complex_normal",
    "draw_rayleigh",
    "draw_estimated",
    "switch_by_gain",
    "switch_strongest",
    "validate_switch",
    "load_channel",
]


@dataclass(frozen=True)
class Rng:
    """Reproducible random source: a seed plus a substream derivation path.

    The underlying bit generator is counter-based (Philox) keyed by
    ``SeedSequence(seed, spawn_key=path)``. The same seed, algorithm, and
    path always produce the same stream, and substreams derived from
    distinct paths are statistically independent. Monte Carlo loops give
    each trial index its own substream, which is what makes results
    independent of how trials are scheduled across workers.
    """

    seed: int
    algorithm: str = "philox"
    path: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.algorithm != "philox":
            raise ValueError(f"unknown rng algorithm {self.algorithm!r}")

    def generator(self) -> np.random.Generator:
        """Fresh generator at the start of this stream (same output each call)."""
        seq = np.random.SeedSequence(self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(seq))

    def substream(self, *path: int) -> "Rng":
        """Child stream addressed by one or more nonnegative integers."""
        return dataclasses.replace(self, path=self.path + tuple(int(p) for p in path))


def complex_normal(gen: np.random.Generator, shape, var=1.0) -> np.ndarray:
    """Circularly symmetric complex Gaussian draws with the given variance.

    ``var`` may be a scalar or an array broadcastable to ``shape``; it is the
    total variance E|x|^2, split evenly between real and imaginary parts.
    """
    x = gen.standard_normal(shape) + 1j * gen.standard_normal(shape)
    return x * np.sqrt(np.asarray(var) / 2.0)


def draw_rayleigh(n: int, rng: Rng) -> np.ndarray:
    """i.i.d. unit-variance Rayleigh-fading gains for ``n`` antennas."""
    if n < 1:
        raise ValueError("need at least one antenna")
    return complex_normal(rng.generator(), n)


@dataclass(frozen=True)
class EstimatedChannel:
    """Channel estimate plus the per-antenna estimation-error variance.

    The true gain decomposes as ``h = h_hat + err`` with the error
    independent of the estimate, err ~ CN(0, sigma_t_sq) per antenna.
    """

    h_hat: np.ndarray
    sigma_t_sq: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.sigma_t_sq <= 1.0:
            raise ValueError("sigma_t_sq must lie in [0, 1]")


def draw_estimated(n: int, sigma_t_sq: float, rng: Rng) -> tuple[EstimatedChannel, np.ndarray]:
    """Draw a Rayleigh channel split into an estimate and its error.

    Returns the estimate wrapper and the true gain vector. The estimate has
    per-antenna variance ``1 - sigma_t_sq`` so the true channel stays unit
    variance.
    """
    if not 0.0 <= sigma_t_sq <= 1.0:
        raise ValueError("sigma_t_sq must lie in [0, 1]")
    gen = rng.generator()
    h_hat = complex_normal(gen, n, 1.0 - sigma_t_sq)
    err = complex_normal(gen, n, sigma_t_sq)
    return EstimatedChannel(h_hat, sigma_t_sq), h_hat + err


def switch_by_gain(gains: np.ndarray, k: int) -> np.ndarray:
    """Boolean switch marking the ``k`` largest entries of ``gains``.

    Ties break toward the lower antenna index.
    """
    gains = np.asarray(gains, dtype=float)
    n = gains.shape[0]
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    delta = np.zeros(n, dtype=bool)
    # stable sort on the negated gains keeps lower indices first among ties
    order = np.argsort(-gains, kind="stable")
    delta[order[:k]] = True
    return delta


def switch_strongest(h: np.ndarray, k: int) -> np.ndarray:
    """High-resolution pairs on the ``k`` strongest antennas of ``h``."""
    return switch_by_gain(np.abs(np.asarray(h)), k)


def validate_switch(delta: np.ndarray, n: int) -> np.ndarray:
    """Check a switch pattern against an antenna count and return it as bool."""
    delta = np.asarray(delta)
    if delta.shape != (n,):
        raise ValueError(f"switch pattern has shape {delta.shape}, expected ({n},)")
    return delta.astype(bool)


def load_channel(path) -> np.ndarray:
    """Read per-antenna gains from a text file, one "re im" pair per line.

    Blank lines and '#' comments are ignored.
    """
    try:
        table = np.loadtxt(path, ndmin=2)
    except ValueError as exc:
        raise ValueError(f"malformed channel file {path}: {exc}") from exc
    if table.shape[1] != 2:
        raise ValueError(
            f"channel file {path} must have two columns (re im), got {table.shape[1]}"
        )
    if table.shape[0] < 1:
        raise ValueError(f"channel file {path} is empty")
    return table[:, 0] + 1j * table[:, 1]
