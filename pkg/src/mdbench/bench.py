"""Benchmark harness: run configurations, records, CSV persistence, presets,
and speedup/efficiency summaries.

A benchmark run builds a lattice configuration, equilibrates it, then times a
production phase. Records capture the configuration alongside wall time,
throughput, phase fractions, rebuild/overflow counters, the relative energy
drift over production, and the engine version. With a fixed seed and the
deterministic flag the sample series of a run is bitwise reproducible; only
the wall-clock fields vary between repetitions.

Config files are plain ``key = value`` lines (# comments allowed); every key
must be a known field. Records and samples serialize to CSV with floats at
17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, fields, replace

from . import __version__ as _engine_version
from .backend import PARALLEL, SEQUENTIAL, BackendSelector
from .errors import ConfigError, NeighborOverflowError, SimulationAborted, \
    SingularPairError
from .integrate import ThermostatParams, init_lattice_any, init_velocities
from .potential import make_shifted
from .sim import ALL_TO_ALL, FORCE_MODES, TRUNCATED, Simulation


@dataclass(frozen=True)
class BenchConfig:
    """Everything that defines one benchmark run."""

    n_particles: int = 500
    density: float = 0.8
    temperature: float = 1.5
    dt: float = 0.002
    steps: int = 1000
    r_cut: float = 2.5           # inf for untruncated
    skin: float = 0.5
    thermostat_rate: float = 0.0
    seed: int = 42
    force_mode: str = TRUNCATED
    backend: str = SEQUENTIAL
    worker_count: int = 1
    deterministic: bool = True
    sample_interval: int = 100
    equilibration_steps: int = 200

    def validate(self):
        if self.n_particles < 1:
            raise ConfigError("n_particles must be >= 1")
        if not (self.density > 0.0 and math.isfinite(self.density)):
            raise ConfigError("density must be positive")
        if not (self.temperature > 0.0 and math.isfinite(self.temperature)):
            raise ConfigError("temperature must be positive")
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ConfigError("dt must be positive")
        if self.steps < 1:
            raise ConfigError("steps must be >= 1")
        if not self.r_cut > 0.0:
            raise ConfigError("r_cut must be positive (inf allowed)")
        if self.skin < 0.0:
            raise ConfigError("skin must be non-negative")
        if self.thermostat_rate < 0.0:
            raise ConfigError("thermostat_rate must be non-negative")
        if self.force_mode not in FORCE_MODES:
            raise ConfigError(f"unknown force_mode {self.force_mode!r}")
        if self.force_mode == TRUNCATED and math.isinf(self.r_cut):
            raise ConfigError("truncated force mode needs a finite r_cut")
        if self.backend not in (SEQUENTIAL, PARALLEL):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.worker_count < 1:
            raise ConfigError("worker_count must be >= 1")
        if self.sample_interval < 1:
            raise ConfigError("sample_interval must be >= 1")
        if self.equilibration_steps < 0:
            raise ConfigError("equilibration_steps must be >= 0")

    def physics_fields(self):
        """Fields that change the trajectory (everything but execution)."""
        skip = {"backend", "worker_count"}
        return {f.name: getattr(self, f.name) for f in fields(self)
                if f.name not in skip}


CONFIG_FIELDS = tuple(f.name for f in fields(BenchConfig))
_FIELD_TYPES = {f.name: f.type for f in fields(BenchConfig)}


def _coerce(name: str, raw: str):
    kind = _FIELD_TYPES[name]
    raw = raw.strip()
    if kind == "int":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name} expects an integer, got {raw!r}")
    if kind == "float":
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{name} expects a number, got {raw!r}")
    if kind == "bool":
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"{name} expects true/false, got {raw!r}")
    return raw


def config_from_mapping(mapping) -> BenchConfig:
    unknown = set(mapping) - set(CONFIG_FIELDS)
    if unknown:
        raise ConfigError(
            f"unknown config key(s): {', '.join(sorted(unknown))}")
    cfg = BenchConfig(**mapping)
    cfg.validate()
    return cfg


def parse_config_file(path) -> BenchConfig:
    """Parse a key = value config file into a validated BenchConfig."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, raw = text.partition("=")
            key = key.strip()
            if key not in CONFIG_FIELDS:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = _coerce(key, raw)
    return config_from_mapping(values)


PRESETS = {
    # untruncated all-pairs workload, microcanonical production
    "all2all-2k": BenchConfig(
        n_particles=2000, density=0.8, temperature=1.0, dt=0.002, steps=5000,
        r_cut=math.inf, skin=0.5, thermostat_rate=0.0, seed=42,
        force_mode=ALL_TO_ALL, backend=SEQUENTIAL, worker_count=1,
        deterministic=True, sample_interval=50, equilibration_steps=500),
    # same system run four times longer
    "all2all-2k-long": BenchConfig(
        n_particles=2000, density=0.8, temperature=1.0, dt=0.002, steps=20000,
        r_cut=math.inf, skin=0.5, thermostat_rate=0.0, seed=42,
        force_mode=ALL_TO_ALL, backend=SEQUENTIAL, worker_count=1,
        deterministic=True, sample_interval=50, equilibration_steps=500),
    # neighbor-list workload at ten thousand particles, thermostatted
    "trunc-10k": BenchConfig(
        n_particles=10000, density=0.8, temperature=1.5, dt=0.002, steps=5000,
        r_cut=2.5, skin=0.5, thermostat_rate=5.0, seed=42,
        force_mode=TRUNCATED, backend=SEQUENTIAL, worker_count=1,
        deterministic=True, sample_interval=100, equilibration_steps=500),
    # small and quick, for smoke runs
    "smoke-256": BenchConfig(
        n_particles=256, density=0.8, temperature=1.5, dt=0.002, steps=200,
        r_cut=2.5, skin=0.5, thermostat_rate=5.0, seed=42,
        force_mode=TRUNCATED, backend=SEQUENTIAL, worker_count=1,
        deterministic=True, sample_interval=50, equilibration_steps=100),
}


def preset_config(name: str) -> BenchConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")


METRIC_FIELDS = ("wall_time_s", "steps_per_second", "force_time_fraction",
                 "nlist_time_fraction", "rebuild_count", "overflow_events",
                 "final_energy_drift_rel", "engine_version")
RECORD_COLUMNS = CONFIG_FIELDS + METRIC_FIELDS


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark run's configuration plus measured outcomes."""

    config: BenchConfig
    wall_time_s: float
    steps_per_second: float
    force_time_fraction: float
    nlist_time_fraction: float
    rebuild_count: int
    overflow_events: int
    final_energy_drift_rel: float
    engine_version: str = _engine_version

    def row(self):
        vals = [getattr(self.config, name) for name in CONFIG_FIELDS]
        vals += [getattr(self, name) for name in METRIC_FIELDS]
        return [_format_value(v) for v in vals]


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _parse_record_value(name: str, raw: str):
    if name in ("n_particles", "steps", "seed", "worker_count",
                "sample_interval", "equilibration_steps", "rebuild_count",
                "overflow_events"):
        return int(raw)
    if name in ("density", "temperature", "dt", "r_cut", "skin",
                "thermostat_rate", "wall_time_s", "steps_per_second",
                "force_time_fraction", "nlist_time_fraction",
                "final_energy_drift_rel"):
        return float(raw)
    if name == "deterministic":
        return raw == "true"
    return raw


def write_records_csv(path, records, append: bool = False):
    """Write (or append) benchmark records; floats carry 17 significant
    digits, lines end with a bare newline."""
    mode = "a" if append else "w"
    with open(path, mode, encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if not append or fh.tell() == 0:
            writer.writerow(RECORD_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())


def read_records_csv(path):
    """Read records back; raises ConfigError on a malformed header."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: empty records file")
        if header != list(RECORD_COLUMNS):
            raise ConfigError(f"{path}: unexpected records header")
        records = []
        for row in reader:
            if not row:
                continue
            named = {name: _parse_record_value(name, raw)
                     for name, raw in zip(RECORD_COLUMNS, row)}
            cfg = BenchConfig(**{k: named[k] for k in CONFIG_FIELDS})
            records.append(BenchRecord(
                config=cfg,
                **{k: named[k] for k in METRIC_FIELDS}))
        return records


SAMPLE_COLUMNS = ("step", "time", "potential_energy", "kinetic_energy",
                  "total_energy", "temperature", "px", "py", "pz",
                  "rebuild_count")


def write_samples_csv(path, samples):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SAMPLE_COLUMNS)
        for s in samples:
            writer.writerow([
                str(s.step), _format_value(s.time),
                _format_value(s.potential_energy),
                _format_value(s.kinetic_energy),
                _format_value(s.total_energy),
                _format_value(s.temperature),
                _format_value(s.total_momentum[0]),
                _format_value(s.total_momentum[1]),
                _format_value(s.total_momentum[2]),
                str(s.rebuild_count),
            ])


def build_simulation(config: BenchConfig) -> Simulation:
    """Construct the simulation a config describes (lattice + velocities)."""
    config.validate()
    state, box = init_lattice_any(config.n_particles, config.density)
    init_velocities(state, config.temperature, config.seed)
    lj = make_shifted(1.0, 1.0, config.r_cut)
    backend = BackendSelector(kind=config.backend,
                              worker_count=config.worker_count)
    thermostat = None
    if config.thermostat_rate > 0.0:
        thermostat = ThermostatParams(temperature=config.temperature,
                                      rate=config.thermostat_rate,
                                      seed=config.seed)
    return Simulation(
        state, box, lj, dt=config.dt, backend=backend,
        force_mode=config.force_mode, skin=config.skin,
        thermostat=thermostat, sample_interval=config.sample_interval,
        deterministic=config.deterministic)


def _partial_record(config, wall, steps_done, sim) -> BenchRecord:
    rate = steps_done / wall if wall > 0 else 0.0
    return BenchRecord(
        config=config, wall_time_s=wall, steps_per_second=rate,
        force_time_fraction=min(sim.force_seconds / wall, 1.0) if sim and wall > 0 else 0.0,
        nlist_time_fraction=min(sim.nlist_seconds / wall, 1.0) if sim and wall > 0 else 0.0,
        rebuild_count=sim.rebuild_count if sim else 0,
        overflow_events=sim.overflow_events if sim else 0,
        final_energy_drift_rel=math.nan)


def run_benchmark(config: BenchConfig):
    """Equilibrate, then time a production phase.

    Returns ``(record, samples)`` where samples cover production only. On a
    fatal runtime error (a singular pair, a neighbor list that cannot fit)
    raises :class:`SimulationAborted` carrying the partial record.
    """
    try:
        sim = build_simulation(config)
    except (SingularPairError, NeighborOverflowError) as err:
        raise SimulationAborted(err, _partial_record(config, 0.0, 0, None))

    sim.sampling_enabled = False
    t0 = time.perf_counter()
    try:
        sim.run(config.equilibration_steps)
    except (SingularPairError, NeighborOverflowError) as err:
        wall = time.perf_counter() - t0
        raise SimulationAborted(err, _partial_record(config, wall, 0, sim))

    sim.reset_counters()
    sim.samples = []
    sim.sampling_enabled = True
    start = sim.measure()

    t0 = time.perf_counter()
    try:
        sim.run(config.steps)
    except (SingularPairError, NeighborOverflowError) as err:
        wall = time.perf_counter() - t0
        steps_done = sim.engine.step_count - config.equilibration_steps
        raise SimulationAborted(
            err, _partial_record(config, wall, steps_done, sim), sim.samples)
    wall = time.perf_counter() - t0

    end = sim.measure()
    denom = abs(start.total_energy)
    drift = (abs(end.total_energy - start.total_energy) / denom
             if denom > 0 else abs(end.total_energy - start.total_energy))

    record = BenchRecord(
        config=config,
        wall_time_s=wall,
        steps_per_second=config.steps / wall if wall > 0 else 0.0,
        force_time_fraction=min(sim.force_seconds / wall, 1.0) if wall > 0 else 0.0,
        nlist_time_fraction=min(sim.nlist_seconds / wall, 1.0) if wall > 0 else 0.0,
        rebuild_count=sim.rebuild_count,
        overflow_events=sim.overflow_events,
        final_energy_drift_rel=drift,
    )
    return record, list(sim.samples)


def run_sweep(config: BenchConfig, worker_counts):
    """One sequential baseline run plus one parallel run per worker count."""
    worker_counts = sorted(set(int(w) for w in worker_counts))
    if any(w < 1 for w in worker_counts):
        raise ConfigError("worker counts must be >= 1")
    records = []
    seq = replace(config, backend=SEQUENTIAL, worker_count=1)
    records.append(run_benchmark(seq)[0])
    for w in worker_counts:
        par = replace(config, backend=PARALLEL, worker_count=w)
        records.append(run_benchmark(par)[0])
    return records


@dataclass(frozen=True)
class SpeedupRow:
    worker_count: int
    wall_time_s: float
    speedup: float      # vs the chosen baseline
    efficiency: float   # speedup vs single-worker parallel, over workers


def compute_speedup_efficiency(records, baseline: str = "sequential"):
    """Speedup and efficiency rows for the parallel records in a set.

    ``baseline`` selects the reference wall time: "sequential" (the
    sequential-backend record) or "single" (the one-worker parallel record).
    Efficiency always normalizes against the single-worker parallel time;
    it is NaN when that record is absent. All records must share identical
    physics fields.
    """
    if not records:
        raise ConfigError("no records to summarize")
    ref = records[0].config.physics_fields()
    for rec in records[1:]:
        other = rec.config.physics_fields()
        diff = [k for k in ref if other[k] != ref[k]
                and not (isinstance(ref[k], float) and math.isnan(ref[k]))]
        if diff:
            raise ConfigError(
                "records mix different physics configurations; differing "
                f"field(s): {', '.join(diff)}")

    seq = [r for r in records if r.config.backend == SEQUENTIAL]
    par = sorted((r for r in records if r.config.backend == PARALLEL),
                 key=lambda r: r.config.worker_count)
    single = next((r for r in par if r.config.worker_count == 1), None)

    if baseline == "sequential":
        if not seq:
            raise ConfigError("no sequential-backend record for the baseline")
        base_time = seq[-1].wall_time_s
    elif baseline == "single":
        if single is None:
            raise ConfigError("no single-worker parallel record for the baseline")
        base_time = single.wall_time_s
    else:
        raise ConfigError(f"unknown baseline {baseline!r}")

    rows = []
    for rec in par:
        eff = math.nan
        if single is not None:
            eff = (single.wall_time_s / rec.wall_time_s) / rec.config.worker_count
        rows.append(SpeedupRow(
            worker_count=rec.config.worker_count,
            wall_time_s=rec.wall_time_s,
            speedup=base_time / rec.wall_time_s,
            efficiency=eff,
        ))
    return rows
