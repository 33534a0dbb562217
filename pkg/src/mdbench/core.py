"""Periodic box geometry, version-tracked particle storage, and the
signal-driven step loop.

Positions are stored wrapped into [0, L) per axis together with integer
image counts, so unwrapped coordinates can always be reconstructed as
``wrapped + image * L``. Every per-particle array sits behind a
:class:`TrackedBuffer`, a pair of distinct allocations (a host copy and a
compute copy) with a version counter and explicit read/write acquisition.
On a single shared-memory node the two sides are both plain numpy arrays;
the discipline of declaring which side is valid is what makes the data
movement observable and testable.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError

HOST = "host"
COMPUTE = "compute"
_SIDES = (HOST, COMPUTE)


class SimBox:
    """Orthorhombic periodic box.

    Parameters
    ----------
    edge_lengths : array_like, shape (3,)
        Box edge lengths, all strictly positive.
    """

    __slots__ = ("edge_lengths", "inverse_edges")

    def __init__(self, edge_lengths):
        edges = np.array(edge_lengths, dtype=np.float64).reshape(-1)
        if edges.shape != (3,):
            raise ValueError("edge_lengths must have exactly three components")
        if not np.all(np.isfinite(edges)) or np.any(edges <= 0.0):
            raise ValueError("edge_lengths must be finite and positive")
        self.edge_lengths = edges
        self.edge_lengths.setflags(write=False)
        self.inverse_edges = 1.0 / edges
        self.inverse_edges.setflags(write=False)

    @classmethod
    def cubic(cls, edge: float) -> "SimBox":
        return cls((edge, edge, edge))

    @property
    def volume(self) -> float:
        return float(np.prod(self.edge_lengths))

    def __repr__(self):
        lx, ly, lz = self.edge_lengths
        return f"SimBox(({lx:g}, {ly:g}, {lz:g}))"


def minimum_image(dr, box: SimBox):
    """Map displacement vectors to their nearest periodic image.

    Uses ``dr - L * rint(dr / L)`` per component, with rint's default
    round-half-to-even tie handling, so a displacement of exactly L/2
    maps to -L/2 deterministically. Works on a single vector or an
    (n, 3) array.
    """
    dr = np.asarray(dr, dtype=np.float64)
    return dr - box.edge_lengths * np.rint(dr * box.inverse_edges)


def wrap_position(r, image, box: SimBox):
    """Wrap positions into [0, L) and absorb the shift into image counts.

    Returns ``(wrapped, image_new)`` where ``wrapped + image_new * L``
    reconstructs the unwrapped coordinate. Total for any finite input,
    however many box lengths the particle has travelled.
    """
    r = np.asarray(r, dtype=np.float64)
    image = np.asarray(image, dtype=np.int64)
    k = np.floor(r * box.inverse_edges)
    wrapped = r - k * box.edge_lengths
    # floor guarantees 0 <= wrapped < L in exact arithmetic; rounding in
    # the product can leave a stray value just outside, so nudge it back.
    low = wrapped < 0.0
    if np.any(low):
        wrapped = np.where(low, wrapped + box.edge_lengths, wrapped)
        k = np.where(low, k - 1.0, k)
    high = wrapped >= box.edge_lengths
    if np.any(high):
        wrapped = np.where(high, wrapped - box.edge_lengths, wrapped)
        k = np.where(high, k + 1.0, k)
    return wrapped, image + k.astype(np.int64)


class TrackedBuffer:
    """Double buffer with explicit ownership and a version counter.

    The buffer owns two same-shape allocations, one per side (``HOST`` and
    ``COMPUTE``). ``valid_on`` records which side holds current data
    ("host", "compute", or "both"). Reads from a stale side trigger a copy
    from the valid side; writes invalidate the other side and bump the
    version. ``copy_count`` counts actual copies so tests can assert that
    redundant transfers never happen.
    """

    __slots__ = ("_data", "version", "valid_on", "copy_count")

    def __init__(self, array):
        host = np.array(array)
        self._data = {HOST: host, COMPUTE: host.copy()}
        self.version = 0
        self.valid_on = "both"
        self.copy_count = 0

    @property
    def shape(self):
        return self._data[HOST].shape

    @property
    def dtype(self):
        return self._data[HOST].dtype

    def _other(self, side):
        return COMPUTE if side == HOST else HOST

    def _require_side(self, side):
        if side not in _SIDES:
            raise ValueError(f"unknown buffer side {side!r}")

    def acquire_read(self, side):
        """Return a read-only view of ``side``, syncing it first if stale."""
        self._require_side(side)
        if self.valid_on not in (side, "both"):
            np.copyto(self._data[side], self._data[self._other(side)])
            self.copy_count += 1
            self.valid_on = "both"
        view = self._data[side].view()
        view.flags.writeable = False
        return view

    def acquire_write(self, side):
        """Return ``side`` writable, discarding whatever the other side holds."""
        self._require_side(side)
        self.version += 1
        self.valid_on = side
        return self._data[side]

    def acquire_update(self, side):
        """Read-modify-write acquisition: sync ``side`` if stale, then mark
        it as the sole valid side and return it writable."""
        self.acquire_read(side)
        return self.acquire_write(side)


class ParticleState:
    """Structure-of-arrays particle data, each array behind a TrackedBuffer.

    Arrays
    ------
    positions : (n, 3) float64, wrapped into [0, L)
    images : (n, 3) int64, periodic image counts
    velocities : (n, 3) float64
    forces : (n, 3) float64
    masses : (n,) float64, strictly positive
    species : (n,) int32
    per_particle_potential : (n,) float64, half-share of each pair energy
    """

    def __init__(self, positions, velocities=None, masses=None, images=None,
                 species=None):
        pos = np.array(positions, dtype=np.float64)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError("positions must have shape (n, 3)")
        n = pos.shape[0]
        if n < 1:
            raise ValueError("at least one particle is required")

        def _take(arr, shape, dtype, fill):
            if arr is None:
                out = np.full(shape, fill, dtype=dtype)
            else:
                out = np.array(arr, dtype=dtype)
                if out.shape != shape:
                    raise ValueError(f"expected shape {shape}, got {out.shape}")
            return out

        masses_arr = _take(masses, (n,), np.float64, 1.0)
        if np.any(masses_arr <= 0.0):
            raise ValueError("masses must be strictly positive")

        self.positions = TrackedBuffer(pos)
        self.images = TrackedBuffer(_take(images, (n, 3), np.int64, 0))
        self.velocities = TrackedBuffer(_take(velocities, (n, 3), np.float64, 0.0))
        self.forces = TrackedBuffer(np.zeros((n, 3), dtype=np.float64))
        self.masses = TrackedBuffer(masses_arr)
        self.species = TrackedBuffer(_take(species, (n,), np.int32, 0))
        self.per_particle_potential = TrackedBuffer(np.zeros(n, dtype=np.float64))

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def buffers(self):
        """All per-particle buffers keyed by name (used for reordering)."""
        return {
            "positions": self.positions,
            "images": self.images,
            "velocities": self.velocities,
            "forces": self.forces,
            "masses": self.masses,
            "species": self.species,
            "per_particle_potential": self.per_particle_potential,
        }

    def unwrapped_positions(self, box: SimBox, side=COMPUTE):
        pos = self.positions.acquire_read(side)
        img = self.images.acquire_read(side)
        return pos + img * box.edge_lengths

    def validate(self, box: SimBox):
        pos = self.positions.acquire_read(HOST)
        if np.any(pos < 0.0) or np.any(pos >= box.edge_lengths):
            raise ValueError("positions must be wrapped into [0, L) per axis")
        if np.any(self.masses.acquire_read(HOST) <= 0.0):
            raise ValueError("masses must be strictly positive")


class SignalEngine:
    """Step loop that fires named signals in a fixed order.

    Each step emits ``integrate``, ``force``, ``finalize`` and then, once the
    post-step counter is a multiple of ``sample_interval``, ``sample``.
    Slots attached to one signal run in attachment order. ``sample_initial``
    additionally emits one sample before the first step of the first call to
    :meth:`run_steps`, so the starting configuration can be recorded.
    """

    SIGNALS = ("integrate", "force", "finalize", "sample")
    MANDATORY = ("integrate", "force", "finalize")

    def __init__(self, sample_interval: int = 1, sample_initial: bool = False):
        if int(sample_interval) < 1:
            raise ConfigError("sample_interval must be >= 1")
        self.sample_interval = int(sample_interval)
        self.sample_initial = bool(sample_initial)
        self.step_count = 0
        self._slots = {name: [] for name in self.SIGNALS}
        self._initial_sample_done = False

    def connect(self, signal: str, slot):
        if signal not in self._slots:
            raise ConfigError(f"unknown signal {signal!r}")
        if not callable(slot):
            raise ConfigError("slot must be callable")
        self._slots[signal].append(slot)

    def emit(self, signal: str):
        for slot in self._slots[signal]:
            slot()

    def run_steps(self, n_steps: int):
        if n_steps < 0:
            raise ValueError("n_steps must be non-negative")
        for name in self.MANDATORY:
            if not self._slots[name]:
                raise ConfigError(f"no slot attached to mandatory signal {name!r}")
        if n_steps == 0:
            return
        if self.sample_initial and not self._initial_sample_done:
            self._initial_sample_done = True
            self.emit("sample")
        for _ in range(n_steps):
            self.emit("integrate")
            self.emit("force")
            self.emit("finalize")
            self.step_count += 1
            if self.step_count % self.sample_interval == 0:
                self.emit("sample")
