"""Reproducible chunked random streams.

Work is cut into fixed-size chunks; chunk ``i`` of a run seeded with ``seed``
always draws from the Philox stream keyed by ``(seed, i)``. Results are
concatenated in chunk order, so they do not depend on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

CHUNK_SIZE = 1 << 16

T = TypeVar("T")


def substream(seed: int, index: int = 0, *, salt: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(salt), int(index)))
    return np.random.Generator(np.random.Philox(ss))


def chunk_sizes(n: int, chunk_size: int = CHUNK_SIZE) -> list[int]:
    if n < 0:
        raise ValueError("n must be non-negative")
    full, rest = divmod(n, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def map_chunks(
    fn: Callable[[np.random.Generator, int], T],
    n: int,
    seed: int,
    *,
    salt: int = 0,
    threads: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> list[T]:
    """Apply ``fn(rng, size)`` to every chunk; results in chunk order."""
    sizes = chunk_sizes(n, chunk_size)
    jobs = [(substream(seed, i, salt=salt), size) for i, size in enumerate(sizes)]
    if threads <= 1 or len(jobs) <= 1:
        return [fn(rng, size) for rng, size in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))
