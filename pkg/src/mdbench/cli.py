"""Command-line interface.

Subcommands:

- ``run``: one benchmark from a config file and/or overrides, optionally
  writing the record and the sample series to CSV.
- ``sweep``: a worker-count scaling study, appending records to a CSV and
  printing a speedup/efficiency table.
- ``verify``: quick self-checks of forces, neighbor lists, and conservation
  against the brute-force reference.
- ``presets``: list the built-in configurations.

Exit codes: 0 success, 1 configuration or validation error, 2 runtime
failure (singular pair, neighbor list overflow beyond the growth budget, or
a failed verification).
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .bench import (PRESETS, BenchConfig, compute_speedup_efficiency,
                    parse_config_file, preset_config, run_benchmark,
                    run_sweep, write_records_csv, write_samples_csv)
from .errors import ConfigError, NeighborOverflowError, SimulationAborted, \
    SingularPairError

_OVERRIDE_FIELDS = {
    "n_particles": int, "steps": int, "seed": int, "worker_count": int,
    "sample_interval": int, "equilibration_steps": int,
    "density": float, "temperature": float, "dt": float, "r_cut": float,
    "skin": float, "thermostat_rate": float,
    "force_mode": str, "backend": str,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mdbench",
        description="Lennard-Jones molecular dynamics benchmark harness")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--preset", help="named built-in configuration")
        for name, kind in _OVERRIDE_FIELDS.items():
            p.add_argument(f"--{name.replace('_', '-')}", type=kind,
                           dest=name, default=None)

    run_p = sub.add_parser("run", help="run one benchmark")
    add_config_args(run_p)
    run_p.add_argument("--output", help="records CSV to append to")
    run_p.add_argument("--samples", help="samples CSV to write")

    sweep_p = sub.add_parser("sweep", help="worker-count scaling study")
    add_config_args(sweep_p)
    sweep_p.add_argument("--workers", default="1,2,4",
                         help="comma-separated worker counts (default 1,2,4)")
    sweep_p.add_argument("--output", help="records CSV to append to")
    sweep_p.add_argument("--baseline", choices=("sequential", "single"),
                         default="sequential",
                         help="reference time for the speedup column")

    verify_p = sub.add_parser("verify", help="run built-in self-checks")
    verify_p.add_argument("--seed", type=int, default=2024)

    presets_p = sub.add_parser("presets", help="inspect built-in presets")
    presets_p.add_argument("action", choices=("list",))
    return parser


def _load_config(args) -> BenchConfig:
    if args.config and args.preset:
        raise ConfigError("give either --config or --preset, not both")
    if args.config:
        cfg = parse_config_file(args.config)
    elif args.preset:
        cfg = preset_config(args.preset)
    else:
        cfg = BenchConfig()
    overrides = {name: getattr(args, name, None) for name in _OVERRIDE_FIELDS}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if overrides:
        cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


def _print_record(record):
    cfg = record.config
    print(f"n={cfg.n_particles} steps={cfg.steps} force_mode={cfg.force_mode} "
          f"backend={cfg.backend} workers={cfg.worker_count}")
    print(f"wall_time_s={record.wall_time_s:.6g} "
          f"steps_per_second={record.steps_per_second:.6g}")
    print(f"force_time_fraction={record.force_time_fraction:.3f} "
          f"nlist_time_fraction={record.nlist_time_fraction:.3f} "
          f"rebuilds={record.rebuild_count} overflows={record.overflow_events}")
    print(f"final_energy_drift_rel={record.final_energy_drift_rel:.6g}")


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    record, samples = run_benchmark(cfg)
    _print_record(record)
    if args.output:
        write_records_csv(args.output, [record], append=True)
    if args.samples:
        write_samples_csv(args.samples, samples)
    return 0


def _parse_workers(text: str):
    try:
        workers = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"bad --workers value {text!r}")
    if not workers:
        raise ConfigError("--workers must name at least one count")
    return workers


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    workers = _parse_workers(args.workers)
    records = run_sweep(cfg, workers)
    if args.output:
        write_records_csv(args.output, records, append=True)
    rows = compute_speedup_efficiency(records, baseline=args.baseline)
    seq_time = records[0].wall_time_s
    print(f"sequential baseline: {seq_time:.6g} s")
    print(f"{'workers':>8} {'wall_s':>12} {'speedup':>9} {'efficiency':>11}")
    for row in rows:
        eff = "nan" if math.isnan(row.efficiency) else f"{row.efficiency:.3f}"
        print(f"{row.worker_count:>8} {row.wall_time_s:>12.6g} "
              f"{row.speedup:>9.3f} {eff:>11}")
    return 0


def _cmd_verify(args) -> int:
    from .backend import BackendSelector
    from .bruteforce import forces_and_energy, pairs_within
    from .core import COMPUTE, ParticleState, SimBox
    from .forces import compute_forces_all_to_all, compute_forces_truncated
    from .neighbor import bin_particles, build_neighbor_list
    from .potential import make_shifted

    rng = np.random.default_rng(args.seed)
    failures = []

    def report(name, ok, detail):
        print(f"{name}: {'ok' if ok else 'FAIL'} ({detail})")
        if not ok:
            failures.append(name)

    # forces against the brute-force reference, truncated and untruncated
    worst = 0.0
    for trial in range(5):
        n = 200
        box = SimBox.cubic(6.5)
        state = ParticleState(rng.uniform(0.0, 6.5, size=(n, 3)))
        lj = make_shifted(1.0, 1.0, 2.5)
        grid = bin_particles(state, box, 3.0)
        nlist = build_neighbor_list(state, grid, 3.0, 128, r_cut=2.5)
        compute_forces_truncated(state, lj, box, nlist, BackendSelector())
        ref_f, ref_pe, _ = forces_and_energy(state, lj, box)
        got = state.forces.acquire_read(COMPUTE)
        scale = np.maximum(np.abs(ref_f), 1e-8)
        worst = max(worst, float(np.max(np.abs(got - ref_f) / scale)))
    report("forces vs reference", worst <= 1e-10, f"max rel err {worst:.3g}")

    # neighbor lists list exactly the pairs inside r_list
    mismatch = 0
    for trial in range(5):
        n = 150
        box = SimBox.cubic(7.0)
        state = ParticleState(rng.uniform(0.0, 7.0, size=(n, 3)))
        grid = bin_particles(state, box, 2.2)
        nlist = build_neighbor_list(state, grid, 2.2, 128)
        listed = set()
        for i in range(n):
            for j in nlist.indices[i, :nlist.counts[i]]:
                listed.add((min(i, int(j)), max(i, int(j))))
        expected = pairs_within(state.positions.acquire_read(COMPUTE),
                                box, 2.2)
        mismatch += len(listed ^ expected)
    report("neighbor lists vs reference", mismatch == 0,
           f"{mismatch} pair mismatches")

    # short microcanonical run conserves energy and momentum
    cfg = BenchConfig(n_particles=256, density=0.8, temperature=1.0,
                      steps=400, thermostat_rate=0.0, equilibration_steps=100,
                      sample_interval=400, force_mode="truncated", r_cut=2.5)
    record, _ = run_benchmark(cfg)
    report("energy conservation", record.final_energy_drift_rel <= 1e-4,
           f"relative drift {record.final_energy_drift_rel:.3g}")

    if failures:
        print(f"{len(failures)} verification(s) failed")
        return 2
    print("all verifications passed")
    return 0


def _cmd_presets(args) -> int:
    for name in sorted(PRESETS):
        cfg = PRESETS[name]
        print(f"{name}: n={cfg.n_particles} steps={cfg.steps} "
              f"force_mode={cfg.force_mode} T={cfg.temperature:g} "
              f"rate={cfg.thermostat_rate:g}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": _cmd_run, "sweep": _cmd_sweep,
                "verify": _cmd_verify, "presets": _cmd_presets}
    try:
        return handlers[args.command](args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SimulationAborted as err:
        print(f"aborted: {err.cause}", file=sys.stderr)
        if getattr(args, "output", None) and err.record is not None:
            write_records_csv(args.output, [err.record], append=True)
        return 2
    except (SingularPairError, NeighborOverflowError) as err:
        print(f"aborted: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
