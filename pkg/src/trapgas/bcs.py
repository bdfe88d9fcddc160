"""Mean-field BCS gap and chemical potential for attractive fermions.

The attraction -V0 acts only between time-reversed pairs inside a shell
|t_k - mu| <= d_eps around the Fermi surface, so Delta_k = Delta in the
shell and 0 outside, E_k = sqrt(xi_k^2 + Delta_k^2) with xi_k = t_k - mu,

  N_k   = (1 - (xi_k/E_k) tanh(beta E_k/2)) / 2
  Delta = V0 Sum_shell (Delta/E_k) tanh(beta E_k/2)

Writing S(Delta) = Sum_shell w_k tanh(beta E_k/2)/E_k, the nontrivial
branch exists iff V0 S(0+) > 1; S is strictly decreasing in Delta, so the
largest nonnegative root is unique and bracketed by doubling.  The solver
nests a bracketed root on mu (particle count) around the Delta root at
fixed mu, which keeps the shell's mu-dependence inside the outer bracket.

Capacity substitutes N_k into the fermionic entropy: one binary-entropy
term per momentum mode by default (the count constraint reads
Sum_k N_k = N); spin_factor = 2 doubles both the count and the entropy
for the per-spin-pair reading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import _kernels as K
from .capacity import SweepTable, detect_inflection
from .spectrum import TrapSpectrum
from .statistics import SolverError, adaptive_spectrum, critical_temperatures, \
    solve_mu
from .units_and_config import RunConfig, validate_config

LN2 = math.log(2.0)

# Nontrivial roots below this fraction of max(d_eps, 1) are reported as
# Delta = 0 with the below_resolution flag (no spurious tiny roots).
GAP_FLOOR_REL = 1e-10
GAP_TOL_REL = 1e-10    # |Delta - V0 Sum (Delta/E) tanh| < tol * max(Delta, d_eps)
COUNT_TOL_REL = 1e-9   # |Sum w N_k - N| < tol * N

# The onset/calibration helpers probe beta up to ~1e8, where the count's
# slope in mu makes a 1e-9 N residual unreachable in double precision; the
# shell sum is insensitive to mu at that scale, so a loose solve suffices.
_MU_TOL_LOOSE = 1e-6


@dataclass(frozen=True)
class BcsParams:
    """Shell half-width, attraction strength, target count, kinetic levels.

    V0 = 0 is accepted as the noninteracting reduction probe (the gap
    equation then forces Delta = 0)."""

    d_eps: float
    V0: float
    N: float
    spectrum: TrapSpectrum
    spin_factor: int = 1

    def __post_init__(self):
        if not self.d_eps > 0.0:
            raise ValueError("d_eps must be positive")
        if self.V0 < 0.0:
            raise ValueError("V0 must be nonnegative")
        if not self.N > 0.0:
            raise ValueError("N must be positive")
        if self.spin_factor not in (1, 2):
            raise ValueError("spin_factor must be 1 or 2")
        if self.spectrum.trap.kind != "box3d_pbc":
            raise ValueError("bcs pairing is defined on box3d_pbc kinetic levels")

    @property
    def weights(self) -> np.ndarray:
        return self.spin_factor * self.spectrum.degeneracies


@dataclass(eq=False)
class BcsSolution:
    T: float
    Delta: float
    mu: float
    occupations: np.ndarray   # N_k per level
    E_k: np.ndarray           # quasiparticle energies per level
    eps_k: np.ndarray         # xi_k = t_k - mu per level
    shell: np.ndarray         # bool mask of paired levels
    E: float                  # total energy Sum w t_k N_k
    converged: bool
    gap_residual: float
    count_residual: float
    below_resolution: bool
    params: BcsParams


def bcs_occupation(t_k, mu: float, Delta: float, beta: float, d_eps: float):
    """N_k = (1 - (xi/E) tanh(beta E/2))/2 with the shell rule for Delta_k.

    Scalar in, scalar out; arrays pass through elementwise."""
    t_arr = np.asarray(t_k, dtype=float)
    flat = np.ascontiguousarray(np.atleast_1d(t_arr)).ravel()
    out = K.bcs_occ(flat, mu, Delta, beta, d_eps)
    if t_arr.ndim == 0:
        return float(out[0])
    return np.asarray(out).reshape(t_arr.shape)


def gap_sum(params: BcsParams, mu: float, Delta: float, beta: float) -> float:
    """S(Delta) = Sum_shell w_k tanh(beta E_k/2)/E_k (beta/2 limit at E = 0)."""
    return K.bcs_gap_sum(params.spectrum.energies, params.weights,
                         mu, Delta, beta, params.d_eps)


def solve_delta(params: BcsParams, mu: float, beta: float,
                seed: float = 0.0) -> tuple[float, bool]:
    """Largest nonnegative root of Delta = V0 S(Delta) Delta at fixed mu.

    Returns (Delta, below_resolution).  Delta = 0 when the nontrivial
    branch does not exist (V0 S(0+) <= 1); a root under the resolution
    floor is reported as (0, True)."""
    if params.V0 == 0.0:
        return 0.0, False
    excess = params.V0 * gap_sum(params, mu, 0.0, beta) - 1.0
    if excess <= 0.0:
        return 0.0, False
    hi = max(2.0 * seed, 1e-8)
    for _ in range(220):
        if params.V0 * gap_sum(params, mu, hi, beta) - 1.0 < 0.0:
            break
        hi *= 2.0
    else:
        raise SolverError("gap bracket expansion failed")
    root = brentq(lambda d: params.V0 * gap_sum(params, mu, d, beta) - 1.0,
                  1e-300, hi, xtol=1e-24, rtol=8.9e-16, maxiter=300)
    if root < GAP_FLOOR_REL * max(params.d_eps, 1.0):
        return 0.0, True
    return float(root), False


def solve_gap_and_mu(params: BcsParams, T: float,
                     seed: float = 0.0) -> BcsSolution:
    """Joint (Delta, mu) solution at temperature T.

    Outer bracketed root on mu for Sum w N_k = N, with Delta re-solved at
    every trial mu (so the shell always matches the trial mu; the converged
    shell is a fixed point by construction).  Non-convergence is recorded
    in the residual fields, not raised: the count can jump when a level
    crosses the shell edge, leaving no exact root."""
    if not T > 0.0:
        raise ValueError("T must be positive")
    beta = 1.0 / T
    e = params.spectrum.energies
    w = params.weights
    state = {"seed": seed}

    def count_excess(mu):
        d, _ = solve_delta(params, mu, beta, state["seed"])
        if d > 0.0:
            state["seed"] = d
        return K.bcs_count(e, w, mu, d, beta, params.d_eps) - params.N

    lo = e[0] - 1.0 - 1.0 / beta
    for _ in range(200):
        if count_excess(lo) <= 0.0:
            break
        lo = e[0] - 8.0 * (e[0] - lo)
    else:
        raise SolverError("mu lower bracket expansion failed")
    hi = e[-1]
    step = max(1.0, 1.0 / beta)
    for _ in range(200):
        if count_excess(hi) >= 0.0:
            break
        hi += step
        step *= 8.0
    else:
        raise SolverError(f"cannot reach N = {params.N} with this spectrum")
    mu = brentq(count_excess, lo, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200)

    delta, below = solve_delta(params, mu, beta, state["seed"])
    xi = e - mu
    shell = np.abs(xi) <= params.d_eps
    e_quasi = np.where(shell, np.hypot(xi, delta), np.abs(xi))
    occ = K.bcs_occ(e, mu, delta, beta, params.d_eps)
    count_res = abs(K.bcs_count(e, w, mu, delta, beta, params.d_eps) - params.N)
    gap_res = abs(delta - params.V0 * delta * gap_sum(params, mu, delta, beta))
    converged = (gap_res <= GAP_TOL_REL * max(delta, params.d_eps)
                 and count_res <= COUNT_TOL_REL * params.N)
    energy = K.bcs_energy(e, w, mu, delta, beta, params.d_eps)
    return BcsSolution(T, delta, mu, np.asarray(occ), e_quasi, xi, shell,
                       energy, converged, gap_res, count_res, below, params)


def capacity_bcs(solution: BcsSolution) -> float:
    """Capacity in bits: Sum_k w_k h2(N_k) over momentum modes."""
    p = solution.params
    return K.bcs_entropy(p.spectrum.energies, p.weights, solution.mu,
                         solution.Delta, 1.0 / solution.T, p.d_eps) / LN2


def mu_zero_temperature(spectrum: TrapSpectrum, N: float,
                        spin_factor: int = 1) -> float:
    """T -> 0 chemical potential: the partially filled level's energy, or
    the midgap value for a closed shell."""
    w = spin_factor * spectrum.degeneracies
    cum = np.cumsum(w)
    if N > cum[-1]:
        raise SolverError(f"spectrum holds at most {cum[-1]:g} fermions")
    j = int(np.searchsorted(cum, N - 1e-12 * max(N, 1.0)))
    closed = abs(cum[j] - N) <= 1e-12 * max(N, 1.0)
    if closed and j + 1 < spectrum.energies.size:
        return 0.5 * (spectrum.energies[j] + spectrum.energies[j + 1])
    return float(spectrum.energies[j])


def zero_temperature_gap(params: BcsParams, mu: float) -> float:
    """beta -> inf gap at pinned mu: root of V0 Sum_shell w/sqrt(xi^2+D^2) = 1.

    Used to seed the coldest sweep row and to estimate the gap scale when
    the whole sweep sits below resolution."""
    if params.V0 == 0.0:
        return 0.0
    xi = params.spectrum.energies - mu
    sel = np.abs(xi) <= params.d_eps
    if not np.any(sel):
        return 0.0
    xs, ws = xi[sel], params.weights[sel]

    def excess(d):
        return params.V0 * float(np.sum(ws / np.hypot(xs, d))) - 1.0

    if excess(1e-300) <= 0.0:
        return 0.0
    hi = 1e-12
    while excess(hi) > 0.0:
        hi *= 2.0
        if hi > 1e15:
            raise SolverError("zero-temperature gap bracket expansion failed")
    return float(brentq(excess, 1e-300, hi, xtol=1e-24, rtol=8.9e-16))


def calibrate_v0(spectrum: TrapSpectrum, d_eps: float, N: float, t_star: float,
                 spin_factor: int = 1) -> float:
    """V0 that places the gap onset exactly at t_star for this spectrum:
    V0 = 1/S(0+; mu_fd(t_star), t_star).  The onset scale depends on the
    level list (the shell sum grows with the cutoff), so couplings for
    demonstration sweeps should be calibrated against the spectrum in use."""
    beta = 1.0 / t_star
    mu = solve_mu(spectrum, beta, N, "fermi", g=spin_factor, tol_N=_MU_TOL_LOOSE)
    s0 = K.bcs_gap_sum(spectrum.energies, spin_factor * spectrum.degeneracies,
                       mu, 0.0, beta, d_eps)
    if s0 <= 0.0:
        raise SolverError("empty shell at the requested onset temperature")
    return 1.0 / s0


def estimate_tstar(params: BcsParams, t_lo: float = 1e-8,
                   t_hi: float = 1e4) -> float:
    """Gap-onset temperature: where V0 S(0+; mu_fd(T), T) crosses 1.

    At the onset the gap vanishes, so mu equals the noninteracting value.
    The crossing is located by a sign scan over a log grid (the shell sum
    jumps when levels cross the shell edge as mu moves, so a plain
    bracketing from the grid ends is not safe), then brentq inside the
    sign-change segment.  Returns 0 when pairing never sets in."""

    def excess(t):
        beta = 1.0 / t
        mu = solve_mu(params.spectrum, beta, params.N, "fermi",
                      g=params.spin_factor, tol_N=_MU_TOL_LOOSE)
        return params.V0 * gap_sum(params, mu, 0.0, beta) - 1.0

    if params.V0 == 0.0:
        return 0.0
    ts = np.geomspace(t_lo, t_hi, 25 * int(math.log10(t_hi / t_lo)) + 1)
    prev_t, prev_f = ts[0], excess(ts[0])
    if prev_f <= 0.0:
        return 0.0
    for t in ts[1:]:
        f = excess(t)
        if f <= 0.0:
            return float(brentq(excess, prev_t, t, xtol=1e-12, rtol=8.9e-16))
        prev_t, prev_f = t, f
    raise SolverError(f"gap onset above T = {t_hi:g}")


def params_from_config(config: RunConfig) -> BcsParams:
    """Build BcsParams (spectrum sized for the sweep grid) from a config."""
    config = validate_config(config)
    if config.trap.kind != "box3d_pbc":
        raise ValueError("bcs pairing is defined on box3d_pbc kinetic levels")
    from .capacity import default_grid
    t_grid = np.asarray(config.T_grid, dtype=float) if config.T_grid is not None \
        else default_grid(config)
    from .spectrum import CutoffPolicy
    policy = CutoffPolicy(config.tail_tol, config.cutoff_init, config.cutoff_factor)
    spectrum = adaptive_spectrum(config.trap, 1.0 / t_grid[-1], config.N,
                                 "fermi", config.spin_factor, policy)
    return BcsParams(config.d_eps, config.V0, config.N, spectrum,
                     config.spin_factor)


def bcs_sweep(params: BcsParams, T_grid) -> SweepTable:
    """Sweep coldest to hottest with warm-started gap seeds.

    The coldest row is seeded by the beta -> inf gap at the pinned
    zero-temperature mu; each later row by its predecessor.  Rows that fail
    the residual tolerances are recorded as unconverged and the sweep
    continues.  The sweep-level below_resolution flag is set when the whole
    grid reports Delta = 0 while the zero-temperature estimate is positive
    (the coupling produces a gap too small for the floating floor)."""
    t_grid = np.asarray(T_grid, dtype=float)
    if t_grid.size and np.any(np.diff(t_grid) <= 0.0):
        raise ValueError("T_grid must be strictly increasing")
    t_f = critical_temperatures(params.spectrum.trap, params.N,
                                params.spin_factor)[1]
    norm = ("T_f", t_f)
    if t_grid.size == 0:
        z = np.empty(0)
        return SweepTable(z, z, z, z, z, "bcs", norm, delta=z,
                          converged=np.empty(0, dtype=bool))

    mu0 = mu_zero_temperature(params.spectrum, params.N, params.spin_factor)
    seed0 = zero_temperature_gap(params, mu0)

    def solve_rows(ts, seed):
        sols = []
        for t in ts:
            sol = solve_gap_and_mu(params, float(t), seed)
            if sol.Delta > 0.0:
                seed = sol.Delta
            sols.append(sol)
        return sols

    rows = solve_rows(t_grid, seed0)
    mu = np.array([s.mu for s in rows])
    delta = np.array([s.Delta for s in rows])
    energy = np.array([s.E for s in rows])
    c_bits = np.array([capacity_bcs(s) for s in rows])
    conv = np.array([s.converged for s in rows])
    residuals = tuple(
        {"T": s.T, "gap_residual": s.gap_residual,
         "count_residual": s.count_residual, "converged": s.converged,
         "below_resolution": s.below_resolution,
         "shell_modes": int(np.sum(params.weights[s.shell]))}
        for s in rows)

    table = SweepTable(t_grid, t_grid / t_f, mu, energy, c_bits, "bcs", norm,
                       delta=delta, converged=conv, residuals=residuals)
    table.below_resolution = bool(np.all(delta == 0.0) and seed0 > 0.0)

    def resolver(ts):
        # warm-start each refined point from the nearest coarse row's gap
        j = int(np.searchsorted(t_grid, ts[0]))
        seed = delta[max(j - 1, 0)]
        return np.array([capacity_bcs(s) for s in solve_rows(ts, seed)])

    table.inflection = detect_inflection(table, resolver=resolver)
    return table
