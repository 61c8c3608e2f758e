"""Deterministic Monte Carlo plumbing.

Replicate-level work is keyed by (seed, replicate, purpose) into independent
counter-based streams, fanned out in fixed-size chunks, and reduced with a
pairwise tree whose shape depends only on the chunk count. Results are
therefore bit-identical for any number of workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

# Stream purposes; distinct values guarantee non-overlapping streams for one
# (seed, replicate) pair.
NOISE = 0
VOLATILITY = 1
RESAMPLING = 2
LIMIT = 3
CENTERING = 4

_U64 = 0xFFFFFFFFFFFFFFFF

# Replicates per task. Fixed, so chunk boundaries (and hence the reduction
# tree) never depend on the worker count.
CHUNK = 32


def stream(seed: int, replicate: int = 0, purpose: int = NOISE) -> np.random.Generator:
    """Independent generator for the (seed, replicate, purpose) key.

    Philox is counter-based: streams with distinct spawn keys never overlap,
    so replicate r can be computed on any worker, in any order, with the
    same result.
    """
    ss = np.random.SeedSequence(
        entropy=int(seed) & _U64,
        spawn_key=(int(replicate) & _U64, int(purpose) & _U64),
    )
    return np.random.Generator(np.random.Philox(ss))


def child_seed(seed: int, purpose: int) -> int:
    """Derive a sub-seed so nested Monte Carlo loops do not reuse the
    caller's replicate streams."""
    ss = np.random.SeedSequence(entropy=int(seed) & _U64, spawn_key=(int(purpose) & _U64, 1))
    return int(ss.generate_state(1, np.uint64)[0])


def resolve_workers(workers: int | None) -> int:
    """None means available parallelism."""
    if workers is None:
        return max(1, os.cpu_count() or 1)
    if workers < 1:
        raise ValueError("workers must be a positive integer")
    return int(workers)


def map_chunks(fn: Callable[[int, int], object], count: int, workers: int | None = None) -> list:
    """Apply fn(start, stop) over fixed-size index chunks, results in chunk order.

    fn must be a pure function of its index range (replicate streams derive
    from the index, not from shared state). Threads suffice because the heavy
    work inside fn is numpy, which releases the GIL.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    spans = [(s, min(s + CHUNK, count)) for s in range(0, count, CHUNK)]
    nw = resolve_workers(workers)
    if nw == 1 or len(spans) <= 1:
        return [fn(s, e) for s, e in spans]
    with ThreadPoolExecutor(max_workers=nw) as pool:
        return list(pool.map(lambda span: fn(span[0], span[1]), spans))


def tree_sum(parts: Sequence):
    """Pairwise sum with a tree fixed by len(parts), so the floating-point
    result is independent of how the parts were produced."""
    items = list(parts)
    if not items:
        raise ValueError("tree_sum needs at least one part")
    while len(items) > 1:
        nxt = [items[i] + items[i + 1] for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def ceil_quantile(values: np.ndarray, p: float) -> float:
    """Empirical p-quantile as the ceil(p*R)-th order statistic, no
    interpolation."""
    if not 0.0 < p <= 1.0:
        raise ValueError("quantile level must lie in (0, 1]")
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("empty sample")
    k = int(np.ceil(p * v.size))
    return float(v[max(k, 1) - 1])
