"""Slow, transparent reference implementations used for verification.

Everything here enumerates all pairs directly with vectorized numpy and
leans on the library for reductions, deliberately sharing no code with the
compiled kernels or the cell machinery. One piece IS shared by design: the
componentwise minimum-image arithmetic ``d - L * rint(d * (1/L))``, written
here the same way the kernels write it, so both sides compute bitwise
identical squared separations and never disagree about whether a pair sits
inside the cutoff. Beyond that point the energies and forces are evaluated
through a different expression tree.
"""

from __future__ import annotations

import numpy as np

from .core import COMPUTE, ParticleState, SimBox
from .potential import LJParams


def pairwise_displacements(positions: np.ndarray, box: SimBox):
    """All-pairs minimum-image displacement tensor d[i, j] = ri - rj."""
    d = positions[:, None, :] - positions[None, :, :]
    return d - box.edge_lengths * np.rint(d * box.inverse_edges)


def pairs_within(positions: np.ndarray, box: SimBox, radius: float):
    """Set of unordered index pairs strictly inside ``radius``."""
    d = pairwise_displacements(positions, box)
    r2 = (d * d).sum(axis=-1)
    n = positions.shape[0]
    mask = (r2 < radius * radius) & ~np.eye(n, dtype=bool)
    ii, jj = np.nonzero(np.triu(mask, k=1))
    return {(int(a), int(b)) for a, b in zip(ii, jj)}


def forces_and_energy(state: ParticleState, params: LJParams, box: SimBox):
    """Reference forces, per-particle potential half-shares, and total energy.

    Returns ``(forces, per_particle_potential, total_energy)``. The total is
    the sum over unique pairs (not of the half-shares), one more independent
    route to the same number.
    """
    pos = np.array(state.positions.acquire_read(COMPUTE))
    n = pos.shape[0]
    d = pairwise_displacements(pos, box)
    r2 = d[..., 0] * d[..., 0] + d[..., 1] * d[..., 1] + d[..., 2] * d[..., 2]
    np.fill_diagonal(r2, np.inf)
    if np.any(r2 == 0.0):
        raise ValueError("coincident particles in reference evaluation")

    inside = r2 < params.r_cut * params.r_cut
    sr2 = np.where(inside, (params.sigma ** 2) / r2, 0.0)
    sr6 = sr2 ** 3
    sr12 = sr6 ** 2
    pair_energy = np.where(
        inside, 4.0 * params.epsilon * (sr12 - sr6) + params.energy_shift, 0.0)
    pair_f_over_r = np.where(
        inside, (48.0 * params.epsilon * sr12 - 24.0 * params.epsilon * sr6) / r2,
        0.0)

    forces = (pair_f_over_r[..., None] * d).sum(axis=1)
    per_particle = 0.5 * pair_energy.sum(axis=1)
    total = pair_energy[np.triu_indices(n, k=1)].sum()
    return forces, per_particle, float(total)
