# hfbgeo/execution_plane/common/connectors/seed_counter.py
"""
Per-trial seeds and ordered trial execution.

A run seed is split with numpy's SeedSequence into one 64-bit sub-seed per
trial, so trial k sees the same randomness regardless of thread count, and a
failing trial is reproduced from its sub-seed alone.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, List, TypeVar

import numpy as np

logger = logging.getLogger(__name__)

T = TypeVar("T")


def trial_seeds(seed: int, trials: int, stream: int = 0) -> List[int]:
    """
    Sub-seeds for ``trials`` trials. ``stream`` separates independent sweeps
    that share one run seed (e.g. the steps of a suite).
    """
    root = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in root.spawn(trials)]


def iter_trials(fn: Callable[[int, int], T], seeds: List[int], threads: int = 1) -> Iterator[T]:
    """
    fn(trial_index, sub_seed) over all trials, yielded in trial order whatever
    the completion order.
    """
    if threads <= 1 or len(seeds) <= 1:
        for k, s in enumerate(seeds):
            yield fn(k, s)
        return
    logger.debug("iter_trials: %d trials on %d threads", len(seeds), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(fn, range(len(seeds)), seeds)


def map_trials(fn: Callable[[int, int], T], seeds: List[int], threads: int = 1) -> List[T]:
    return list(iter_trials(fn, seeds, threads))
