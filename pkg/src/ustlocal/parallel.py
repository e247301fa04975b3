"""Seeded task map: results depend on (base seed, task index) only."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np


def task_rng(base_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(base_seed), int(index)])


def _call(args):
    fn, base_seed, index, payload = args
    return fn(task_rng(base_seed, index), payload)


def seeded_map(fn: Callable, payloads: Sequence, base_seed: int, threads: int = 1) -> list:
    """``[fn(rng_i, payload_i)]`` in task order.

    ``fn`` must be a module-level function when ``threads > 1`` (it is pickled
    into worker processes).
    """
    jobs = [(fn, base_seed, i, p) for i, p in enumerate(payloads)]
    if threads <= 1 or len(jobs) <= 1:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_call, jobs))


def chunks(total: int, size: int) -> list[int]:
    """Split ``total`` samples into fixed-size tasks (independent of thread count)."""
    out = [size] * (total // size)
    if total % size:
        out.append(total % size)
    return out
