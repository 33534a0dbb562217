"""Pair-force evaluation: all-to-all and neighbor-list-truncated kernels.

Both kernels fill, for each particle it owns, the total force vector and the
half-share of pair potential energy (each of the two partners books half of
every pair energy, so summing per_particle_potential gives the total once).
Forces on i are accumulated by scanning i's partners, never by scattering to
j, so chunks write disjoint rows and no atomics are needed.

Minimum-image displacements use dr - L * rint(dr * (1/L)) componentwise, the
same arithmetic everywhere in the package, so squared separations are bitwise
reproducible across code paths.

A pair at exactly zero separation marks the particle in a flag array instead
of dividing; the wrapper raises SingularPairError naming the first such pair.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .backend import BackendSelector
from .core import COMPUTE, ParticleState, SimBox
from .errors import NeighborOverflowError, SingularPairError
from .neighbor import NeighborList
from .potential import LJParams


@njit(cache=True, nogil=True)
def _all_to_all_chunk(lo, hi, pos, lx, ly, lz, ilx, ily, ilz,
                      eps, sig2, rc2, shift, forces, pe, bad_j):
    n = pos.shape[0]
    for i in range(lo, hi):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        fx = 0.0
        fy = 0.0
        fz = 0.0
        u = 0.0
        for j in range(n):
            if j == i:
                continue
            dx = xi - pos[j, 0]
            dy = yi - pos[j, 1]
            dz = zi - pos[j, 2]
            dx -= lx * np.rint(dx * ilx)
            dy -= ly * np.rint(dy * ily)
            dz -= lz * np.rint(dz * ilz)
            r2 = dx * dx + dy * dy + dz * dz
            if r2 >= rc2:
                continue
            if r2 == 0.0:
                if bad_j[i] < 0:
                    bad_j[i] = j
                continue
            ir2 = 1.0 / r2
            s2 = sig2 * ir2
            s6 = s2 * s2 * s2
            s12 = s6 * s6
            fr = 24.0 * eps * (2.0 * s12 - s6) * ir2
            u += 0.5 * (4.0 * eps * (s12 - s6) + shift)
            fx += fr * dx
            fy += fr * dy
            fz += fr * dz
        forces[i, 0] = fx
        forces[i, 1] = fy
        forces[i, 2] = fz
        pe[i] = u


@njit(cache=True, nogil=True)
def _truncated_chunk(lo, hi, pos, lx, ly, lz, ilx, ily, ilz,
                     eps, sig2, rc2, shift, nbr, counts, forces, pe, bad_j):
    for i in range(lo, hi):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        fx = 0.0
        fy = 0.0
        fz = 0.0
        u = 0.0
        for k in range(counts[i]):
            j = nbr[i, k]
            dx = xi - pos[j, 0]
            dy = yi - pos[j, 1]
            dz = zi - pos[j, 2]
            dx -= lx * np.rint(dx * ilx)
            dy -= ly * np.rint(dy * ily)
            dz -= lz * np.rint(dz * ilz)
            r2 = dx * dx + dy * dy + dz * dz
            if r2 >= rc2:
                continue
            if r2 == 0.0:
                if bad_j[i] < 0:
                    bad_j[i] = j
                continue
            ir2 = 1.0 / r2
            s2 = sig2 * ir2
            s6 = s2 * s2 * s2
            s12 = s6 * s6
            fr = 24.0 * eps * (2.0 * s12 - s6) * ir2
            u += 0.5 * (4.0 * eps * (s12 - s6) + shift)
            fx += fr * dx
            fy += fr * dy
            fz += fr * dz
        forces[i, 0] = fx
        forces[i, 1] = fy
        forces[i, 2] = fz
        pe[i] = u


def _raise_if_singular(bad_j):
    if bad_j.max() >= 0:
        i = int(np.argmax(bad_j >= 0))
        raise SingularPairError(i, bad_j[i])


def _common_args(state: ParticleState, params: LJParams, box: SimBox):
    pos = state.positions.acquire_read(COMPUTE)
    lx, ly, lz = box.edge_lengths
    ilx, ily, ilz = box.inverse_edges
    return pos, (float(lx), float(ly), float(lz),
                 float(ilx), float(ily), float(ilz),
                 float(params.epsilon), float(params.sigma * params.sigma),
                 float(params.r_cut_sq), float(params.energy_shift))


def compute_forces_all_to_all(state: ParticleState, params: LJParams,
                              box: SimBox, backend: BackendSelector):
    """Fill forces and per-particle potential scanning every pair."""
    n = state.n
    pos, scalars = _common_args(state, params, box)
    forces = state.forces.acquire_write(COMPUTE)
    pe = state.per_particle_potential.acquire_write(COMPUTE)
    bad_j = np.full(n, -1, dtype=np.int64)
    backend.run(_all_to_all_chunk, n, pos, *scalars, forces, pe, bad_j)
    _raise_if_singular(bad_j)


def compute_forces_truncated(state: ParticleState, params: LJParams,
                             box: SimBox, nlist: NeighborList,
                             backend: BackendSelector):
    """Fill forces and per-particle potential scanning listed neighbors only.

    The list must be valid for the current positions (rebuild policy is the
    caller's job) and must not carry the overflow flag.
    """
    if nlist.overflow:
        raise NeighborOverflowError(
            "neighbor list overflowed its stride; rebuild with a larger one")
    n = state.n
    pos, scalars = _common_args(state, params, box)
    forces = state.forces.acquire_write(COMPUTE)
    pe = state.per_particle_potential.acquire_write(COMPUTE)
    bad_j = np.full(n, -1, dtype=np.int64)
    backend.run(_truncated_chunk, n, pos, *scalars,
                nlist.indices, nlist.counts, forces, pe, bad_j)
    _raise_if_singular(bad_j)
