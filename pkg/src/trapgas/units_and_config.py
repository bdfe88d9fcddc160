"""Reduced-unit conventions and the validated run configuration.

All core modules exchange dimensionless numbers: energies, chemical
potentials, gaps and temperatures are multiples of the active trap's
natural energy unit, with k_B = 1.  For the pbc box the unit is

    eps0 = 2 pi^2 hbar^2 / (m L^2),

the coefficient of (n_x^2 + n_y^2 + n_z^2) in the level formula; the
hard-wall box shares the same unit (levels (n^2)/4), the harmonic trap
measures energies in the same unit with the reduced frequency omega as a
knob.  Conversion back to SI is a display-layer helper only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from scipy.constants import hbar, k as k_B

from .spectrum import OMEGA_MATCHED, TrapSpec, trap_violations

__all__ = [
    "OMEGA_MATCHED", "UnitSystem", "unit_system", "epsilon0_joules",
    "reduced_to_kelvin", "ConfigError", "RunConfig", "validate_config",
    "read_config_file", "config_from_items",
]


@dataclass(frozen=True)
class UnitSystem:
    """Record of the active reduced-unit convention."""

    trap_kind: str
    energy_unit: str
    temperature_convention: str = "k_B = 1; T in units of the energy unit"


def unit_system(trap: TrapSpec) -> UnitSystem:
    units = {
        "box3d_pbc": "eps0 = 2 pi^2 hbar^2/(m L^2), pbc level coefficient",
        "box3d_hard": "eps0 = 2 pi^2 hbar^2/(m L^2); hard-wall levels (n^2)/4",
        "harmonic_iso": "eps0 = 2 pi^2 hbar^2/(m L^2); level spacing omega*eps0",
        "power_law": "scale-free power-law trap unit (prefactor convention documented)",
    }
    return UnitSystem(trap.kind, units[trap.kind])


def epsilon0_joules(mass_kg: float, length_m: float) -> float:
    """eps0 = 2 pi^2 hbar^2 / (m L^2) in joules."""
    return 2.0 * math.pi**2 * hbar**2 / (mass_kg * length_m**2)


def reduced_to_kelvin(T_reduced: float, mass_kg: float, length_m: float) -> float:
    """Display helper: reduced temperature -> kelvin for a given atom and box."""
    return T_reduced * epsilon0_joules(mass_kg, length_m) / k_B


class ConfigError(ValueError):
    """Raised by validate_config; carries every violated invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs shared by sweeps, expansions and BCS runs.

    T_grid = None asks the front-end to build the default grid: n_T
    log-spaced points over [T_min_factor, T_max_factor] times the trap's
    reference temperature (T_c for bosons, T_f for fermions/bcs).
    """

    trap: TrapSpec = field(default_factory=lambda: TrapSpec("box3d_pbc"))
    statistics: str = "bose"
    N: float = 100.0
    g: int = 1
    T_grid: tuple[float, ...] | None = None
    T_min_factor: float = 0.05
    T_max_factor: float = 2.5
    n_T: int = 60
    # cutoff policy (see spectrum module): extend the spectrum until the
    # topmost level holds < tail_tol * N particles at the smallest beta.
    tail_tol: float = 1e-9
    cutoff_init: float = 64.0
    cutoff_factor: float = 2.0
    # particle-number solve tolerance, relative to N
    tol_N: float = 1e-9
    # BCS parameters (required when statistics = "bcs")
    d_eps: float | None = None
    V0: float | None = None
    spin_factor: int = 1


_STATISTICS = ("bose", "fermi", "bcs")


def validate_config(raw: RunConfig) -> RunConfig:
    """Return a normalized config or raise ConfigError listing every violation.

    Idempotent: validate_config(validate_config(c)) == validate_config(c).
    """
    bad = []
    trap = raw.trap
    if not isinstance(trap, TrapSpec):
        bad.append("trap must be a TrapSpec")
    else:
        bad.extend(trap_violations(trap))

    if raw.statistics not in _STATISTICS:
        bad.append(f"statistics must be one of {_STATISTICS}")
    if not (raw.N > 0):
        bad.append("N must be positive")
    if not (isinstance(raw.g, int) and raw.g >= 1):
        bad.append("g must be an integer >= 1")
    elif raw.statistics == "bose" and raw.g != 1:
        bad.append("bosons are spinless in this model (g must be 1)")

    grid = raw.T_grid
    if grid is not None:
        grid = tuple(float(t) for t in grid)
        if any(t <= 0 for t in grid):
            bad.append("every T in T_grid must be positive")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            bad.append("T_grid must be strictly increasing")
    if not (0 < raw.T_min_factor < raw.T_max_factor):
        bad.append("need 0 < T_min_factor < T_max_factor")
    if raw.n_T < 1:
        bad.append("n_T must be >= 1")

    if not (raw.tail_tol > 0):
        bad.append("tail_tol must be positive")
    if not (raw.cutoff_init > 0 and raw.cutoff_factor > 1):
        bad.append("cutoff_init must be > 0 and cutoff_factor > 1")
    if not (raw.tol_N > 0):
        bad.append("tol_N must be positive")

    if raw.statistics == "bcs":
        if raw.d_eps is None or not (raw.d_eps > 0):
            bad.append("bcs requires d_eps > 0")
        if raw.V0 is None or not (raw.V0 > 0):
            bad.append("bcs requires V0 > 0")
        if raw.spin_factor not in (1, 2):
            bad.append("spin_factor must be 1 (literal per-mode count) or 2")

    if bad:
        raise ConfigError(bad)
    return replace(raw, N=float(raw.N), T_grid=grid)


# --- config file / override plumbing ----------------------------------------
# Line-oriented key=value format; '#' starts a comment; keys are the
# RunConfig field names plus the TrapSpec keys (trap, d, gamma, omega).
# CLI flags mirror the same keys and override file values.

_TRAP_KEYS = ("trap", "d", "gamma", "omega")


def read_config_file(path) -> dict[str, str]:
    items: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError([f"{path}:{lineno}: expected key=value, got {text!r}"])
            key, value = text.split("=", 1)
            items[key.strip()] = value.strip()
    return items


def _parse_float(key, value, bad):
    try:
        return float(value)
    except ValueError:
        bad.append(f"{key} must be a number, got {value!r}")
        return None


def config_from_items(items: dict) -> RunConfig:
    """Build and validate a RunConfig from string-valued key=value items."""
    bad = []
    known = {f.name for f in fields(RunConfig)} | set(_TRAP_KEYS)
    for key in items:
        if key not in known:
            bad.append(f"unknown config key {key!r}")
    if bad:
        raise ConfigError(bad)

    kind = str(items.get("trap", "box3d_pbc"))
    tkw = {}
    if "d" in items:
        tkw["d"] = int(float(items["d"]))
    if "gamma" in items:
        raw = str(items["gamma"])
        tkw["gamma"] = math.inf if raw in ("inf", "box") else float(raw)
    if "omega" in items:
        tkw["omega"] = _parse_float("omega", items["omega"], bad)
    trap = TrapSpec(kind, **tkw)

    kwargs = {"trap": trap}
    for f in fields(RunConfig):
        if f.name == "trap" or f.name not in items:
            continue
        value = items[f.name]
        if f.name == "statistics":
            kwargs[f.name] = str(value)
        elif f.name in ("g", "n_T", "spin_factor"):
            kwargs[f.name] = int(float(value))
        elif f.name == "T_grid":
            if isinstance(value, str):
                value = [v for v in value.split(",") if v.strip()]
            kwargs[f.name] = tuple(float(v) for v in value)
        else:
            kwargs[f.name] = _parse_float(f.name, value, bad)
    if bad:
        raise ConfigError(bad)
    return validate_config(RunConfig(**kwargs))
