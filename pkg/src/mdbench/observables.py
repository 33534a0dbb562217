"""Scalar observables with a reduction whose grouping is fixed, not
left to the summation library.

The deterministic reduction sums blocks of 4096 values, each block and the
block partials combined by a fixed-shape adjacent-pair tree. The grouping
depends only on the input length, so the result is bitwise reproducible
across runs, backends, and worker counts (block partials may be computed by
a thread pool; each block is a pure function of its slice). The fast mode
is a plain ``np.sum`` for benchmarks that do not need bitwise stability.

Temperature uses 3n momentum degrees of freedom. The engine fixes total
momentum at initialization but does not constrain it afterwards, so no
degrees are subtracted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import BackendSelector
from .core import HOST, ParticleState

DETERMINISTIC = "deterministic"
FAST = "fast"

_BLOCK = 4096


def _tree_sum(values: np.ndarray) -> float:
    a = values.astype(np.float64, copy=True)
    while a.size > 1:
        m = a.size // 2
        paired = a[0:2 * m:2] + a[1:2 * m:2]
        if a.size % 2:
            a = np.concatenate([paired, a[-1:]])
        else:
            a = paired
    return float(a[0])


def reduce_sum(values, mode: str = DETERMINISTIC,
               backend: BackendSelector | None = None) -> float:
    """Sum a float array; empty input sums to exactly 0.0.

    ``deterministic`` fixes the pairing tree as documented above.
    ``fast`` delegates the grouping to numpy.
    """
    a = np.ascontiguousarray(values, dtype=np.float64).ravel()
    if a.size == 0:
        return 0.0
    if mode == FAST:
        return float(np.sum(a))
    if mode != DETERMINISTIC:
        raise ValueError(f"unknown reduction mode {mode!r}")
    if a.size <= _BLOCK:
        return _tree_sum(a)
    bounds = list(range(0, a.size, _BLOCK))
    partials = np.empty(len(bounds), dtype=np.float64)

    def _block_partial(k):
        lo = bounds[k]
        partials[k] = _tree_sum(a[lo:lo + _BLOCK])

    if backend is not None and backend.kind == "parallel" \
            and backend.worker_count > 1:
        from .backend import _pool
        list(_pool(backend.worker_count).map(_block_partial,
                                             range(len(bounds))))
    else:
        for k in range(len(bounds)):
            _block_partial(k)
    return _tree_sum(partials)


def kinetic_energy_and_temperature(state: ParticleState,
                                   mode: str = DETERMINISTIC):
    """Total kinetic energy and instantaneous temperature 2 KE / (3 n)."""
    v = state.velocities.acquire_read(HOST)
    m = state.masses.acquire_read(HOST)
    per_particle = 0.5 * m * np.einsum("ij,ij->i", v, v)
    ke = reduce_sum(per_particle, mode)
    return ke, 2.0 * ke / (3.0 * state.n)


def potential_energy_total(state: ParticleState,
                           mode: str = DETERMINISTIC) -> float:
    """Sum of the per-particle half-shares filled by the force kernels."""
    return reduce_sum(state.per_particle_potential.acquire_read(HOST), mode)


def total_momentum(state: ParticleState, mode: str = DETERMINISTIC):
    """Componentwise sum of m v, reduced deterministically per component."""
    v = state.velocities.acquire_read(HOST)
    m = state.masses.acquire_read(HOST)
    mv = m[:, None] * v
    return np.array([reduce_sum(mv[:, c], mode) for c in range(3)])


@dataclass(frozen=True)
class Sample:
    """One observation of the running system."""

    step: int
    time: float
    potential_energy: float
    kinetic_energy: float
    total_energy: float
    temperature: float
    total_momentum: tuple
    rebuild_count: int
