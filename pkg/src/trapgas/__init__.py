"""trapgas: classical information capacity of trapped ideal quantum gases.

Reduced units throughout: energies in eps0 = 2 pi^2 hbar^2 / (m L^2) for box
traps (hbar omega for the oscillator ladder), temperatures with k_B = 1.
Capacity of the noiseless channel is the grand-canonical entropy in bits.
"""

from ._kernels import BACKEND
from .bcs import BcsParams, BcsSolution, bcs_occupation, bcs_sweep, \
    capacity_bcs, estimate_tstar, solve_delta, solve_gap_and_mu
from .capacity import InflectionResult, SweepTable, capacity, capacity_bose, \
    capacity_fermi, default_grid, detect_inflection, log_grand_partition, \
    sweep, thermo_capacity
from .expansion import ExpansionReport, expansion_coefficients, \
    fugacity_series, series_capacity, systematic, systematicity, theorem_check
from .spectrum import OMEGA_MATCHED, CutoffPolicy, SmoothSums, SpectrumError, \
    TrapSpec, TrapSpectrum, build_spectrum, density_of_states, dos_sums, \
    dump_spectrum, smooth_sums
from .statistics import GasState, SolverError, adaptive_spectrum, \
    average_energy, critical_temperatures, occupation, particle_count, \
    reference_temperatures, solve_mu, solve_state
from .units_and_config import ConfigError, RunConfig, UnitSystem, \
    config_from_items, epsilon0_joules, read_config_file, reduced_to_kelvin, \
    unit_system, validate_config

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BcsParams", "BcsSolution", "ConfigError", "CutoffPolicy",
    "ExpansionReport", "GasState", "InflectionResult", "OMEGA_MATCHED",
    "RunConfig", "SmoothSums", "SolverError", "SpectrumError", "SweepTable",
    "TrapSpec", "TrapSpectrum", "UnitSystem", "adaptive_spectrum",
    "average_energy", "bcs_occupation", "bcs_sweep", "build_spectrum",
    "capacity", "capacity_bcs", "capacity_bose", "capacity_fermi",
    "config_from_items", "critical_temperatures", "default_grid",
    "density_of_states", "detect_inflection", "dos_sums", "dump_spectrum",
    "epsilon0_joules", "estimate_tstar", "expansion_coefficients",
    "fugacity_series", "log_grand_partition", "occupation", "particle_count",
    "read_config_file", "reduced_to_kelvin", "reference_temperatures",
    "series_capacity", "smooth_sums", "solve_delta", "solve_gap_and_mu",
    "solve_mu", "solve_state", "sweep", "systematic", "systematicity",
    "theorem_check",
    "thermo_capacity", "unit_system", "validate_config",
]
