"""Deterministic fan-out of independent Monte Carlo trials."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

__all__ = ["map_trials"]


def map_trials(fn, trials: int, workers: int = 1) -> list:
    """Evaluate ``fn(i)`` for i in range(trials), results in index order.

    Each trial must derive its randomness from its own index (substream),
    never from shared state; then the gathered list, and anything reduced
    from it in order, is bit-identical for every worker count. Threads are
    enough here because the work inside a trial is numpy calls that release
    the GIL.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if workers == 1 or trials <= 1:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))
