"""Portable Lennard-Jones molecular dynamics mini-engine.

A compact MD code organized around swappable execution backends: the same
chunk kernels run sequentially or on a thread pool with bitwise identical
results, neighbor lists keep the truncated force path linear in particle
count, and a benchmark harness records timing splits, scaling, and energy
conservation for any configuration.
"""

__version__ = "0.1.0"

from .backend import BackendSelector
from .core import (COMPUTE, HOST, ParticleState, SignalEngine, SimBox,
                   TrackedBuffer, minimum_image, wrap_position)
from .errors import (ConfigError, NeighborOverflowError, SimulationAborted,
                     SingularPairError)
from .integrate import (IntegratorParams, ThermostatParams,
                        andersen_thermostat, init_lattice, init_lattice_any,
                        init_velocities, vv_finalize, vv_integrate)
from .neighbor import (CellGrid, NeighborList, bin_particles,
                       build_neighbor_list, needs_rebuild, reorder_by_cell)
from .observables import (Sample, kinetic_energy_and_temperature,
                          potential_energy_total, reduce_sum, total_momentum)
from .potential import LJParams, lj_eval, make_shifted
from .forces import compute_forces_all_to_all, compute_forces_truncated
from .sim import Simulation
from .bench import (BenchConfig, BenchRecord, PRESETS,
                    compute_speedup_efficiency, parse_config_file,
                    preset_config, run_benchmark, run_sweep,
                    read_records_csv, write_records_csv, write_samples_csv)

__all__ = [
    "__version__",
    "BackendSelector",
    "BenchConfig", "BenchRecord", "PRESETS",
    "CellGrid", "COMPUTE", "ConfigError", "HOST",
    "IntegratorParams", "LJParams", "NeighborList", "NeighborOverflowError",
    "ParticleState", "Sample", "SignalEngine", "SimBox", "Simulation",
    "SimulationAborted", "SingularPairError", "ThermostatParams",
    "TrackedBuffer",
    "andersen_thermostat", "bin_particles", "build_neighbor_list",
    "compute_forces_all_to_all", "compute_forces_truncated",
    "compute_speedup_efficiency", "init_lattice", "init_lattice_any",
    "init_velocities", "kinetic_energy_and_temperature", "lj_eval",
    "make_shifted", "minimum_image", "needs_rebuild", "parse_config_file",
    "potential_energy_total", "preset_config", "read_records_csv",
    "reduce_sum", "reorder_by_cell", "run_benchmark", "run_sweep",
    "total_momentum", "vv_finalize", "vv_integrate", "wrap_position",
    "write_records_csv", "write_samples_csv",
]
