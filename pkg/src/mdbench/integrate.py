"""Velocity-Verlet integration, the Andersen thermostat, and initial
conditions (fcc lattice positions, Maxwell-Boltzmann velocities).

The integrator is split to match the step loop's signal order: the
``integrate`` slot does the first velocity half-kick and the position drift
(with wrapping), the force evaluation runs in between, and the ``finalize``
slot does the second half-kick. The thermostat, when active, also runs at
finalize time, after the half-kick.

Thermostat draws come from the counter-based streams in :mod:`.rng`, so the
set of redrawn particles and their new velocities at a given step depend only
on (seed, step), never on execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .core import COMPUTE, ParticleState, SimBox, wrap_position


@dataclass(frozen=True)
class IntegratorParams:
    dt: float

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ValueError("dt must be positive and finite")


@dataclass(frozen=True)
class ThermostatParams:
    """Andersen collision parameters.

    rate is the collision frequency nu; each step every particle
    independently has probability min(nu * dt, 1) of having its velocity
    redrawn from the Maxwell-Boltzmann distribution at ``temperature``.
    """

    temperature: float
    rate: float
    seed: int

    def __post_init__(self):
        if not (self.temperature > 0.0 and math.isfinite(self.temperature)):
            raise ValueError("temperature must be positive and finite")
        if not (self.rate >= 0.0 and math.isfinite(self.rate)):
            raise ValueError("rate must be non-negative and finite")

    def redraw_probability(self, dt: float) -> float:
        return min(self.rate * dt, 1.0)


def vv_integrate(state: ParticleState, params: IntegratorParams, box: SimBox):
    """First half-kick plus drift: v += (F/m) dt/2, r += v dt, then wrap."""
    dt = params.dt
    f = state.forces.acquire_read(COMPUTE)
    m = state.masses.acquire_read(COMPUTE)
    v = state.velocities.acquire_update(COMPUTE)
    v += (f / m[:, None]) * (0.5 * dt)
    r = state.positions.acquire_update(COMPUTE)
    img = state.images.acquire_update(COMPUTE)
    r += v * dt
    wrapped, img_new = wrap_position(r, img, box)
    r[...] = wrapped
    img[...] = img_new


def vv_finalize(state: ParticleState, params: IntegratorParams):
    """Second half-kick with the freshly computed forces."""
    dt = params.dt
    f = state.forces.acquire_read(COMPUTE)
    m = state.masses.acquire_read(COMPUTE)
    v = state.velocities.acquire_update(COMPUTE)
    v += (f / m[:, None]) * (0.5 * dt)


def andersen_thermostat(state: ParticleState, params: ThermostatParams,
                        dt: float, step: int) -> int:
    """Redraw a Bernoulli-selected subset of velocities at ``step``.

    Per step the thermostat stream supplies n uniform words (the redraw
    decisions, in particle order) followed by 3n normal words (particle-major
    components), so particle i's fate and replacement velocity sit at fixed
    word positions regardless of which particles are selected. Returns the
    number of particles redrawn.
    """
    p = params.redraw_probability(dt)
    if p <= 0.0:
        return 0
    n = state.n
    u = rng.uniforms(params.seed, rng.STREAM_THERMOSTAT, step, n)
    redraw = u < p
    count = int(np.count_nonzero(redraw))
    if count == 0:
        return 0
    z = rng.normals(params.seed, rng.STREAM_THERMOSTAT, step, 3 * n,
                    word_offset=n).reshape(n, 3)
    m = state.masses.acquire_read(COMPUTE)
    scale = np.sqrt(params.temperature / m)
    v = state.velocities.acquire_update(COMPUTE)
    v[redraw] = z[redraw] * scale[redraw, None]
    return count


def fcc_sites(cells_per_axis: int) -> np.ndarray:
    """Unit-cell-relative fcc site coordinates for a k x k x k cell block,
    in lexicographic (cell, then basis offset) order, units of the cell edge."""
    k = int(cells_per_axis)
    base = np.array([[0.0, 0.0, 0.0],
                     [0.0, 0.5, 0.5],
                     [0.5, 0.0, 0.5],
                     [0.5, 0.5, 0.0]])
    cells = np.stack(np.meshgrid(np.arange(k), np.arange(k), np.arange(k),
                                 indexing="ij"), axis=-1).reshape(-1, 3)
    return (cells[:, None, :] + base[None, :, :]).reshape(-1, 3)


def init_lattice(n: int, density: float):
    """Particles on a perfect fcc lattice in a cubic box at ``density``.

    n must equal 4 k^3 for integer k (the fcc unit cell carries four sites).
    Returns ``(state, box)`` with zero velocities and unit masses.
    """
    if not (density > 0.0 and math.isfinite(density)):
        raise ValueError("density must be positive and finite")
    if n < 4:
        raise ValueError("an fcc lattice needs at least 4 particles")
    k = round((n / 4.0) ** (1.0 / 3.0))
    if 4 * k ** 3 != n:
        lower = max(k, 1)
        candidates = (4 * lower ** 3, 4 * (lower + 1) ** 3)
        nearest = min(candidates, key=lambda c: abs(c - n))
        raise ValueError(
            f"n={n} is not an fcc count (4 k^3); nearest valid n is {nearest}")
    edge = (n / density) ** (1.0 / 3.0)
    positions = fcc_sites(k) * (edge / k)
    box = SimBox.cubic(edge)
    return ParticleState(positions), box


def init_lattice_any(n: int, density: float):
    """fcc-based configuration for arbitrary n at ``density``.

    Exact fcc when n is 4 k^3; otherwise the smallest enclosing fcc lattice
    with evenly spread vacancies (site i of the n kept is floor(i * M / n) of
    the M lattice sites, a strictly increasing selection). Minimum site
    separation is the fcc nearest-neighbor distance either way, so no two
    particles start close enough to be singular.
    """
    if not (density > 0.0 and math.isfinite(density)):
        raise ValueError("density must be positive and finite")
    if n < 1:
        raise ValueError("need at least one particle")
    k = 1
    while 4 * k ** 3 < n:
        k += 1
    m_sites = 4 * k ** 3
    edge = (n / density) ** (1.0 / 3.0)
    sites = fcc_sites(k) * (edge / k)
    if m_sites == n:
        positions = sites
    else:
        keep = (np.arange(n, dtype=np.int64) * m_sites) // n
        positions = sites[keep]
    box = SimBox.cubic(edge)
    return ParticleState(positions), box


def init_velocities(state: ParticleState, temperature: float, seed: int):
    """Maxwell-Boltzmann velocities at ``temperature``, zero total momentum,
    instantaneous kinetic temperature rescaled to the target exactly.

    Draws 3n normal words from the init-velocities stream at step 0,
    particle-major, then removes the center-of-mass velocity and rescales.
    """
    if temperature < 0.0 or not math.isfinite(temperature):
        raise ValueError("temperature must be non-negative and finite")
    n = state.n
    v = state.velocities.acquire_write(COMPUTE)
    if temperature == 0.0:
        v[...] = 0.0
        return
    if n == 1:
        raise ValueError(
            "cannot set a nonzero temperature for a single particle with "
            "zero total momentum")
    m = state.masses.acquire_read(COMPUTE)
    z = rng.normals(seed, rng.STREAM_INIT_VELOCITIES, 0, 3 * n).reshape(n, 3)
    v[...] = z * np.sqrt(temperature / m)[:, None]
    total_mass = m.sum()
    v -= (m[:, None] * v).sum(axis=0) / total_mass
    t_now = (m[:, None] * v * v).sum() / (3.0 * n)
    v *= math.sqrt(temperature / t_now)
