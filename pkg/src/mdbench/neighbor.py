"""Cell binning, Verlet neighbor lists, and the rebuild policy.

Particles are binned into a grid of cells at least r_list wide, so all
partners within the listing radius of a particle sit in its own cell or one
of the 26 surrounding ones. Lists are full (symmetric): if j appears in i's
row then i appears in j's, which lets the force kernels own one output row
per particle with no scatter.

The grid is stored CSR-style: a stable counting sort groups particle indices
by flattened cell, ``cell_start`` delimits each cell's slice. Fewer than
three cells along any axis would make the 27-cell scan double-count periodic
images, so such grids carry a fallback flag and the list is built by a
brute-force scan instead.

Each list remembers the unwrapped positions it was built from;
``needs_rebuild`` triggers once any particle has moved farther than half the
skin, the classic displacement criterion that keeps a list valid between
rebuilds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .backend import BackendSelector
from .core import COMPUTE, ParticleState, SimBox
from .errors import ConfigError


@dataclass
class CellGrid:
    """CSR cell occupancy for one configuration."""

    cells_per_axis: np.ndarray      # (3,) int64
    cell_edge: np.ndarray           # (3,) float64
    box_edges: np.ndarray           # (3,) float64, the box this grid binned
    cell_of_particle: np.ndarray    # (n,) int64, flattened cell index
    cell_start: np.ndarray          # (n_cells + 1,) int64
    cell_particles: np.ndarray      # (n,) int64, grouped by cell
    fallback: bool                  # true when any axis has < 3 cells

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.cells_per_axis))

    def occupancy_counts(self):
        return np.diff(self.cell_start)

    def occupants(self, flat_cell: int):
        return self.cell_particles[self.cell_start[flat_cell]:
                                   self.cell_start[flat_cell + 1]]


def bin_particles(state: ParticleState, box: SimBox, r_list: float) -> CellGrid:
    """Bin particles into cells at least r_list wide.

    Every box edge must be >= r_list so at least one cell fits per axis.
    Particles landing exactly on the top boundary through rounding are
    clamped into the last cell.
    """
    if not (r_list > 0.0 and np.isfinite(r_list)):
        raise ValueError("r_list must be positive and finite")
    edges = box.edge_lengths
    if np.any(edges < r_list):
        raise ConfigError(
            f"every box edge must be >= r_list ({r_list:g}); box is {edges}")
    ncells = np.maximum(np.floor(edges / r_list).astype(np.int64), 1)
    cell_edge = edges / ncells

    pos = state.positions.acquire_read(COMPUTE)
    idx = np.floor(pos / cell_edge).astype(np.int64)
    np.clip(idx, 0, ncells - 1, out=idx)
    flat = (idx[:, 0] * ncells[1] + idx[:, 1]) * ncells[2] + idx[:, 2]

    order = np.argsort(flat, kind="stable")
    counts = np.bincount(flat, minlength=int(np.prod(ncells)))
    cell_start = np.zeros(counts.size + 1, dtype=np.int64)
    np.cumsum(counts, out=cell_start[1:])

    return CellGrid(
        cells_per_axis=ncells,
        cell_edge=cell_edge,
        box_edges=edges.copy(),
        cell_of_particle=flat,
        cell_start=cell_start,
        cell_particles=order.astype(np.int64),
        fallback=bool(np.any(ncells < 3)),
    )


@dataclass
class NeighborList:
    """Fixed-stride full neighbor list plus its rebuild bookkeeping."""

    indices: np.ndarray            # (n, stride) int32, row i sorted ascending
    counts: np.ndarray             # (n,) int32, valid entries per row
    stride: int
    overflow: bool                 # some row needed more than stride entries
    r_list: float
    r_cut: float
    positions_at_build: np.ndarray  # (n, 3) unwrapped snapshot
    rebuild_count: int             # builds so far in this list's lineage

    @property
    def skin(self) -> float:
        return self.r_list - self.r_cut


@njit(cache=True, nogil=True)
def _list_cells_chunk(lo, hi, pos, lx, ly, lz, ilx, ily, ilz,
                      ncx, ncy, ncz, cell_of, cell_start, cell_particles,
                      rl2, nbr, counts, overflow):
    stride = nbr.shape[1]
    for i in range(lo, hi):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        ci = cell_of[i]
        cz = ci % ncz
        cy = (ci // ncz) % ncy
        cx = ci // (ncz * ncy)
        cnt = 0
        for ox in range(-1, 2):
            jx = (cx + ox) % ncx
            for oy in range(-1, 2):
                jy = (cy + oy) % ncy
                for oz in range(-1, 2):
                    jz = (cz + oz) % ncz
                    cj = (jx * ncy + jy) * ncz + jz
                    for p in range(cell_start[cj], cell_start[cj + 1]):
                        j = cell_particles[p]
                        if j == i:
                            continue
                        dx = xi - pos[j, 0]
                        dy = yi - pos[j, 1]
                        dz = zi - pos[j, 2]
                        dx -= lx * np.rint(dx * ilx)
                        dy -= ly * np.rint(dy * ily)
                        dz -= lz * np.rint(dz * ilz)
                        r2 = dx * dx + dy * dy + dz * dz
                        if r2 < rl2:
                            if cnt < stride:
                                nbr[i, cnt] = j
                            else:
                                overflow[i] = 1
                            cnt += 1
        filled = min(cnt, stride)
        counts[i] = filled
        nbr[i, :filled].sort()


@njit(cache=True, nogil=True)
def _list_brute_chunk(lo, hi, pos, lx, ly, lz, ilx, ily, ilz,
                      rl2, nbr, counts, overflow):
    n = pos.shape[0]
    stride = nbr.shape[1]
    for i in range(lo, hi):
        xi = pos[i, 0]
        yi = pos[i, 1]
        zi = pos[i, 2]
        cnt = 0
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
            if r2 < rl2:
                if cnt < stride:
                    nbr[i, cnt] = j
                else:
                    overflow[i] = 1
                cnt += 1
        counts[i] = min(cnt, stride)
        # brute scan emits ascending j already; no sort needed


def build_neighbor_list(state: ParticleState, grid: CellGrid, r_list: float,
                        stride: int, r_cut: float | None = None,
                        prev: NeighborList | None = None,
                        backend: BackendSelector | None = None) -> NeighborList:
    """Build a full neighbor list from a cell grid.

    Rows that would exceed ``stride`` set the overflow flag rather than
    silently truncating; an overflowed list is unusable for forces and the
    caller is expected to grow the stride and rebuild. When the grid has
    fewer than three cells along some axis the 27-cell scan is replaced by a
    brute-force scan over all pairs (the ``fallback`` flag on the grid).

    ``r_cut`` defaults to ``r_list`` (zero skin) for standalone use; the
    simulation loop always passes its force cutoff so the displacement
    criterion has a real skin to work with.
    """
    if int(stride) < 1:
        raise ConfigError("stride must be >= 1")
    stride = int(stride)
    if r_cut is None:
        r_cut = r_list
    if not (0.0 < r_cut <= r_list):
        raise ValueError("need 0 < r_cut <= r_list")
    if backend is None:
        backend = BackendSelector()

    n = state.n
    pos = state.positions.acquire_read(COMPUTE)
    lx, ly, lz = (float(v) for v in grid.box_edges)
    ilx, ily, ilz = 1.0 / lx, 1.0 / ly, 1.0 / lz
    rl2 = float(r_list) * float(r_list)

    nbr = np.zeros((n, stride), dtype=np.int32)
    counts = np.zeros(n, dtype=np.int32)
    overflow = np.zeros(n, dtype=np.uint8)

    if grid.fallback:
        backend.run(_list_brute_chunk, n, pos, lx, ly, lz, ilx, ily, ilz,
                    rl2, nbr, counts, overflow)
    else:
        ncx, ncy, ncz = (int(v) for v in grid.cells_per_axis)
        backend.run(_list_cells_chunk, n, pos, lx, ly, lz, ilx, ily, ilz,
                    ncx, ncy, ncz, grid.cell_of_particle, grid.cell_start,
                    grid.cell_particles, rl2, nbr, counts, overflow)

    box = SimBox(grid.box_edges)
    return NeighborList(
        indices=nbr,
        counts=counts,
        stride=stride,
        overflow=bool(overflow.any()),
        r_list=float(r_list),
        r_cut=float(r_cut),
        positions_at_build=state.unwrapped_positions(box, COMPUTE),
        rebuild_count=(prev.rebuild_count if prev is not None else 0) + 1,
    )


def needs_rebuild(state: ParticleState, box: SimBox,
                  nlist: NeighborList) -> bool:
    """True once any particle moved more than skin/2 since the list was built.

    Displacements are measured on unwrapped coordinates, so boundary
    crossings do not fake large moves. With zero skin any motion at all
    triggers a rebuild.
    """
    disp = state.unwrapped_positions(box, COMPUTE) - nlist.positions_at_build
    max_sq = float(np.max(np.einsum("ij,ij->i", disp, disp)))
    half_skin = 0.5 * nlist.skin
    return max_sq > half_skin * half_skin


def reorder_by_cell(state: ParticleState, grid: CellGrid) -> np.ndarray:
    """Permute all per-particle arrays into cell order (stable by old index).

    Returns the permutation applied, i.e. new row k holds old row perm[k].
    Purely a memory-locality transform: values are moved, never recomputed,
    so per-particle data is bitwise identical after the index remap. The
    grid's particle indexing is stale afterwards; bin again before building
    lists.
    """
    perm = np.argsort(grid.cell_of_particle, kind="stable")
    for buf in state.buffers().values():
        data = buf.acquire_update(COMPUTE)
        data[...] = data[perm]
    return perm
