"""Execution backends sharing one chunk-kernel contract.

A chunk kernel processes particles [lo, hi) and writes only rows it owns, so
the same kernel runs unchanged on the sequential backend (a plain loop over
chunks) and on the thread-parallel backend (a persistent pool). Chunk
boundaries depend only on (n, chunk_size), never on the worker count, and
output rows are disjoint between chunks, which makes results bitwise
identical across backends and worker counts by construction.

Kernels are nogil-compiled, so threads genuinely overlap on multicore hosts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import ConfigError

SEQUENTIAL = "sequential"
PARALLEL = "parallel"

_pools: dict = {}


def _pool(worker_count: int) -> ThreadPoolExecutor:
    pool = _pools.get(worker_count)
    if pool is None:
        pool = ThreadPoolExecutor(max_workers=worker_count,
                                  thread_name_prefix="mdbench")
        _pools[worker_count] = pool
    return pool


@dataclass
class BackendSelector:
    """Chooses how chunk kernels execute.

    kind : "sequential" or "parallel"
    worker_count : threads used by the parallel backend (>= 1)
    chunk_size : particles per chunk (>= 1); fixes the decomposition
    """

    kind: str = SEQUENTIAL
    worker_count: int = 1
    chunk_size: int = 256

    def __post_init__(self):
        if self.kind not in (SEQUENTIAL, PARALLEL):
            raise ConfigError(f"unknown backend kind {self.kind!r}")
        if int(self.worker_count) < 1:
            raise ConfigError("worker_count must be >= 1")
        if int(self.chunk_size) < 1:
            raise ConfigError("chunk_size must be >= 1")
        self.worker_count = int(self.worker_count)
        self.chunk_size = int(self.chunk_size)

    def chunks(self, n: int):
        """Half-open particle ranges covering [0, n), fixed by n and chunk_size."""
        return [(lo, min(lo + self.chunk_size, n))
                for lo in range(0, n, self.chunk_size)]

    def run(self, kernel, n: int, *args):
        """Invoke ``kernel(lo, hi, *args)`` over every chunk of [0, n)."""
        ranges = self.chunks(n)
        if self.kind == SEQUENTIAL or self.worker_count == 1 or len(ranges) <= 1:
            for lo, hi in ranges:
                kernel(lo, hi, *args)
            return
        pool = _pool(self.worker_count)
        futures = [pool.submit(kernel, lo, hi, *args) for lo, hi in ranges]
        for fut in futures:
            fut.result()
