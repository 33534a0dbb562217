"""Simulation assembly: wires the integrator, force evaluation, neighbor
list upkeep, thermostat, and sampling onto the signal-driven step loop.

Phase timers separate force time from neighbor-list time (binning, builds,
and the displacement check) so benchmark records can report how the runtime
splits. Counters and timers can be reset between an equilibration phase and
a production phase; samples carry rebuild counts relative to the last reset.
"""

from __future__ import annotations

import time

from .backend import BackendSelector
from .core import ParticleState, SignalEngine, SimBox
from .errors import ConfigError, NeighborOverflowError
from .forces import compute_forces_all_to_all, compute_forces_truncated
from .integrate import (IntegratorParams, ThermostatParams,
                        andersen_thermostat, vv_finalize, vv_integrate)
from .neighbor import bin_particles, build_neighbor_list, needs_rebuild
from .observables import (DETERMINISTIC, FAST, Sample,
                          kinetic_energy_and_temperature,
                          potential_energy_total, total_momentum)
from .potential import LJParams

ALL_TO_ALL = "all_to_all"
TRUNCATED = "truncated"
FORCE_MODES = (ALL_TO_ALL, TRUNCATED)

DEFAULT_STRIDE = 64
DEFAULT_SKIN = 0.5
STRIDE_GROWTH_LIMIT = 10


class Simulation:
    """A ready-to-run system: state, box, potential, and policies.

    Parameters beyond the physics: ``force_mode`` selects all-to-all or
    neighbor-list evaluation; ``skin`` widens the listing radius beyond the
    force cutoff; ``stride`` caps neighbors per row, doubling on overflow up
    to ``STRIDE_GROWTH_LIMIT`` times; ``deterministic`` picks the fixed-order
    reduction for observables (force accumulation is fixed-order either way).

    Construction computes the initial forces, so energies are well defined
    before the first step and the first half-kick uses real forces.
    """

    def __init__(self, state: ParticleState, box: SimBox, lj: LJParams,
                 dt: float, backend: BackendSelector | None = None,
                 force_mode: str = ALL_TO_ALL, skin: float = DEFAULT_SKIN,
                 stride: int = DEFAULT_STRIDE,
                 thermostat: ThermostatParams | None = None,
                 sample_interval: int = 100, deterministic: bool = True,
                 sample_initial: bool = False):
        if force_mode not in FORCE_MODES:
            raise ConfigError(f"unknown force_mode {force_mode!r}")
        if force_mode == TRUNCATED and not lj.truncated:
            raise ConfigError("truncated force mode needs a finite r_cut")
        if skin < 0.0:
            raise ConfigError("skin must be non-negative")

        self.state = state
        self.box = box
        self.lj = lj
        self.integrator = IntegratorParams(dt)
        self.backend = backend if backend is not None else BackendSelector()
        self.force_mode = force_mode
        self.skin = float(skin)
        self.thermostat = thermostat
        self.reduction_mode = DETERMINISTIC if deterministic else FAST

        self._stride = int(stride)
        self._nlist = None
        self.overflow_events = 0
        self.force_seconds = 0.0
        self.nlist_seconds = 0.0
        self._rebuild_base = 0
        self.samples: list[Sample] = []
        self.sampling_enabled = True

        self.engine = SignalEngine(sample_interval=sample_interval,
                                   sample_initial=sample_initial)
        self.engine.connect("integrate", self._integrate_slot)
        self.engine.connect("force", self._force_slot)
        self.engine.connect("finalize", self._finalize_slot)
        if thermostat is not None and thermostat.rate > 0.0:
            self.engine.connect("finalize", self._thermostat_slot)
        self.engine.connect("sample", self._sample_slot)

        self._compute_forces()

    # ------------------------------------------------------------------ slots

    def _integrate_slot(self):
        vv_integrate(self.state, self.integrator, self.box)

    def _finalize_slot(self):
        vv_finalize(self.state, self.integrator)

    def _thermostat_slot(self):
        andersen_thermostat(self.state, self.thermostat, self.integrator.dt,
                            self.engine.step_count)

    def _force_slot(self):
        self._compute_forces()

    def _sample_slot(self):
        if not self.sampling_enabled:
            return
        self.samples.append(self.measure())

    # ------------------------------------------------------------- force path

    def _compute_forces(self):
        if self.force_mode == ALL_TO_ALL:
            t0 = time.perf_counter()
            compute_forces_all_to_all(self.state, self.lj, self.box,
                                      self.backend)
            self.force_seconds += time.perf_counter() - t0
            return
        t0 = time.perf_counter()
        if self._nlist is None or needs_rebuild(self.state, self.box,
                                                self._nlist):
            self._rebuild()
        self.nlist_seconds += time.perf_counter() - t0
        t0 = time.perf_counter()
        compute_forces_truncated(self.state, self.lj, self.box, self._nlist,
                                 self.backend)
        self.force_seconds += time.perf_counter() - t0

    def _rebuild(self):
        r_list = self.lj.r_cut + self.skin
        growths = 0
        while True:
            grid = bin_particles(self.state, self.box, r_list)
            nlist = build_neighbor_list(self.state, grid, r_list,
                                        self._stride, r_cut=self.lj.r_cut,
                                        prev=self._nlist,
                                        backend=self.backend)
            self._nlist = nlist
            if not nlist.overflow:
                return
            self.overflow_events += 1
            growths += 1
            if growths > STRIDE_GROWTH_LIMIT:
                raise NeighborOverflowError(
                    f"neighbor list still overflows after {growths - 1} "
                    f"stride doublings (stride {self._stride})")
            self._stride *= 2

    # ------------------------------------------------------------ observation

    @property
    def rebuild_count(self) -> int:
        """Rebuilds since the last counter reset."""
        total = self._nlist.rebuild_count if self._nlist is not None else 0
        return total - self._rebuild_base

    def measure(self) -> Sample:
        """Observe the system now (reads the host side of all buffers)."""
        pe = potential_energy_total(self.state, self.reduction_mode)
        ke, temp = kinetic_energy_and_temperature(self.state,
                                                  self.reduction_mode)
        mom = total_momentum(self.state, self.reduction_mode)
        return Sample(
            step=self.engine.step_count,
            time=self.engine.step_count * self.integrator.dt,
            potential_energy=pe,
            kinetic_energy=ke,
            total_energy=pe + ke,
            temperature=temp,
            total_momentum=(float(mom[0]), float(mom[1]), float(mom[2])),
            rebuild_count=self.rebuild_count,
        )

    def reset_counters(self):
        """Zero phase timers, overflow events, and the rebuild baseline
        (used at the equilibration/production boundary)."""
        self.force_seconds = 0.0
        self.nlist_seconds = 0.0
        self.overflow_events = 0
        self._rebuild_base = (self._nlist.rebuild_count
                              if self._nlist is not None else 0)

    def run(self, n_steps: int):
        self.engine.run_steps(n_steps)
