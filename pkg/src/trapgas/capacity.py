"""Channel capacities, temperature sweeps, curvature-change detection.

Capacity of the noiseless channel equals the grand-canonical entropy in
bits.  Per level i (degeneracy g_i):

  bose:  C = -Sum_i g_i [ n_i log2 n_i - (1+n_i) log2(1+n_i) ]
  fermi: C = -g Sum_i g_i [ (n_i/g) log2(n_i/g) + (1-n_i/g) log2(1-n_i/g) ]

with the x log x -> 0 convention at n = 0 (or n = g).  Both are evaluated
through stable kernels; see trapgas._kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .statistics import GasState, adaptive_spectrum, reference_temperatures, \
    solve_state
from .units_and_config import RunConfig, validate_config

LN2 = math.log(2.0)


def capacity_bose(state: GasState) -> float:
    """Bose capacity in bits (degeneracy-weighted sum over levels)."""
    sp = state.spectrum
    return K.entropy_bose(sp.energies, sp.degeneracies, state.beta, state.mu) / LN2


def capacity_fermi(state: GasState) -> float:
    """Fermi capacity in bits: g x binary entropy of n/g per state."""
    sp = state.spectrum
    w = state.g * sp.degeneracies
    return K.entropy_fermi(sp.energies, w, state.beta, state.mu) / LN2


def capacity(state: GasState) -> float:
    return capacity_bose(state) if state.statistics == "bose" else capacity_fermi(state)


def log_grand_partition(state: GasState) -> float:
    """ln Xi for the solved state (used by the entropy-consistency identity)."""
    sp = state.spectrum
    if state.statistics == "bose":
        return K.log_xi_bose(sp.energies, sp.degeneracies, state.beta, state.mu)
    return K.log_xi_fermi(sp.energies, state.g * sp.degeneracies, state.beta, state.mu)


def thermo_capacity(state: GasState) -> float:
    """Capacity from the thermodynamic identity S = ln Xi + beta E - beta mu N.

    Independent route used to cross-check capacity_bose/fermi to 1e-6
    relative (entropy consistency)."""
    s_nats = log_grand_partition(state) + state.beta * state.E \
        - state.beta * state.mu * state.N
    return s_nats / LN2


@dataclass(frozen=True)
class InflectionResult:
    T_star: float
    confidence: float       # jump size relative to difference noise, in (0, 1]
    bracket: tuple[float, float]
    refined: bool
    method: str = "central second differences; single sign change; 10x local refinement"


@dataclass(eq=False)
class SweepTable:
    """Capacity-vs-temperature table (reduced units; C in bits)."""

    T: np.ndarray
    T_norm: np.ndarray
    mu: np.ndarray
    E: np.ndarray
    C_bits: np.ndarray
    statistics: str
    normalizer: tuple[str, float]
    delta: np.ndarray | None = None      # BCS gap column
    converged: np.ndarray | None = None  # BCS per-row convergence
    residuals: tuple = ()                # BCS per-row residual report
    below_resolution: bool = False       # BCS: gap scale under the float floor
    inflection: InflectionResult | None = field(default=None)

    def __len__(self) -> int:
        return int(self.T.size)


def second_differences(t: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Central second-difference estimate of d2C/dT2 on a nonuniform grid
    (interior points only, length len(t) - 2)."""
    h1 = t[1:-1] - t[:-2]
    h2 = t[2:] - t[1:-1]
    return 2.0 * (c[:-2] * h2 - c[1:-1] * (h1 + h2) + c[2:] * h1) \
        / (h1 * h2 * (h1 + h2))


def _sign_changes(d2: np.ndarray) -> list[int]:
    s = np.sign(d2)
    # a zero inherits the preceding sign so an exact zero is not two changes
    for j in range(1, s.size):
        if s[j] == 0:
            s[j] = s[j - 1]
    return [int(j) for j in np.nonzero(s[:-1] * s[1:] < 0)[0]]


def detect_inflection(table: SweepTable, resolver=None) -> InflectionResult | None:
    """Locate the inflection of C(T), or None.

    Central second differences on the raw grid; the result is reported only
    when the curvature changes sign exactly once (zero changes: no
    transition; several: no unique inflection, e.g. the fermionic
    low-T activation shoulder).  With a `resolver(T_array) -> C_array` the
    bracket is re-solved on a 10x finer local grid.  Confidence compares the
    d2 jump across the change against the median d2 step elsewhere.
    """
    if len(table) < 5:
        return None
    t, c = table.T, table.C_bits
    d2 = second_differences(t, c)
    changes = _sign_changes(d2)
    if len(changes) != 1:
        return None
    j = changes[0]

    steps = np.abs(np.diff(d2))
    mask = np.ones(steps.size, dtype=bool)
    mask[j] = False
    noise = float(np.median(steps[mask])) if np.any(mask) else 0.0
    jump = float(steps[j])
    confidence = jump / (jump + noise) if jump > 0 else 0.0

    # grid rows carrying the sign change (d2 index k sits on grid row k+1)
    ga, gb = j + 1, j + 2
    bracket = (float(t[ga]), float(t[gb]))
    refined = False
    if resolver is not None:
        lo = t[max(ga - 1, 0)]
        hi = t[min(gb + 1, t.size - 1)]
        tf = np.linspace(lo, hi, 10 * 3 + 1)
        cf = np.asarray(resolver(tf), dtype=float)
        d2f = second_differences(tf, cf)
        sub = _sign_changes(d2f)
        if sub:
            k = sub[0]
            a, b = d2f[k], d2f[k + 1]
            ta, tb = tf[k + 1], tf[k + 2]
            t_star = ta + (tb - ta) * a / (a - b) if a != b else 0.5 * (ta + tb)
            bracket = (float(ta), float(tb))
            refined = True
        else:
            a, b = d2[j], d2[j + 1]
            t_star = t[ga] + (t[gb] - t[ga]) * a / (a - b)
    else:
        a, b = d2[j], d2[j + 1]
        t_star = t[ga] + (t[gb] - t[ga]) * a / (a - b)
    return InflectionResult(float(t_star), float(confidence), bracket, refined)


def default_grid(config: RunConfig) -> np.ndarray:
    """n_T log-spaced temperatures over [T_min_factor, T_max_factor] x T_ref,
    T_ref = T_c for bosons and T_f for fermions/bcs."""
    t_c, t_f = reference_temperatures(config.trap, config.N, config.g)
    t_ref = t_c if config.statistics == "bose" else t_f
    lo, hi = config.T_min_factor * t_ref, config.T_max_factor * t_ref
    if config.n_T == 1:
        return np.array([lo])
    return np.exp(np.linspace(math.log(lo), math.log(hi), config.n_T))


def sweep(config: RunConfig, spectrum=None) -> SweepTable:
    """Solve mu, E, C over the temperature grid; detect the inflection.

    Dispatches to bcs.bcs_sweep for statistics = "bcs"."""
    config = validate_config(config)
    if config.statistics == "bcs":
        from . import bcs
        return bcs.bcs_sweep(bcs.params_from_config(config),
                             np.asarray(config.T_grid, dtype=float)
                             if config.T_grid is not None else default_grid(config))

    t_grid = np.asarray(config.T_grid, dtype=float) if config.T_grid is not None \
        else default_grid(config)
    t_c, t_f = reference_temperatures(config.trap, config.N, config.g)
    norm = ("T_c", t_c) if config.statistics == "bose" else ("T_f", t_f)
    if t_grid.size == 0:
        z = np.empty(0)
        return SweepTable(z, z, z, z, z, config.statistics, norm)

    if spectrum is None:
        from .spectrum import CutoffPolicy
        policy = CutoffPolicy(config.tail_tol, config.cutoff_init, config.cutoff_factor)
        spectrum = adaptive_spectrum(config.trap, 1.0 / t_grid[-1], config.N,
                                     config.statistics, config.g, policy)

    def solve_c(ts):
        out = np.empty(len(ts))
        for i, t in enumerate(ts):
            st = solve_state(spectrum, 1.0 / t, config.N, config.statistics,
                             config.g, config.tol_N)
            out[i] = capacity(st)
        return out

    mu = np.empty(t_grid.size)
    energy = np.empty(t_grid.size)
    c_bits = np.empty(t_grid.size)
    for i, t in enumerate(t_grid):
        st = solve_state(spectrum, 1.0 / t, config.N, config.statistics,
                         config.g, config.tol_N)
        mu[i], energy[i], c_bits[i] = st.mu, st.E, capacity(st)

    table = SweepTable(t_grid, t_grid / norm[1], mu, energy, c_bits,
                       config.statistics, norm)
    table.inflection = detect_inflection(table, resolver=solve_c)
    return table
