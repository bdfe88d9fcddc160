"""Grand-canonical occupations, chemical-potential solve, average energy.

Conventions: occupations are per quantum state,
    n^b(eps) = 1/(e^{beta(eps-mu)} - 1),   n^f(eps) = g/(e^{beta(eps-mu)} + 1),
and every sum over a TrapSpectrum weights level i by its degeneracy g_i
(plus the spin factor g for fermions), so the particle constraint reads
Sum_i g_i n_i = N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta

from . import _kernels as K
from .spectrum import CutoffPolicy, SpectrumError, TrapSpec, TrapSpectrum, \
    build_spectrum, density_of_states

_BRENTQ_KW = dict(xtol=1e-15, rtol=8.9e-16, maxiter=200)


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class GasState:
    """A solved grand-canonical state on a fixed spectrum."""

    spectrum: TrapSpectrum
    beta: float
    mu: float
    N: float
    g: int
    statistics: str          # "bose" | "fermi"
    occupations: np.ndarray  # per-state filling: n^b_i, or n^f_i in [0, g]
    E: float

    @property
    def T(self) -> float:
        return 1.0 / self.beta


def occupation(eps, beta: float, mu: float, statistics: str, g: int = 1):
    """Mean occupation of a single-particle state at energy eps."""
    eps_arr = np.asarray(eps, dtype=float)
    flat = np.ascontiguousarray(np.atleast_1d(eps_arr)).ravel()
    if statistics == "bose":
        if np.any(eps_arr <= mu):
            raise ValueError("bose occupation requires eps > mu")
        out = K.occ_bose(flat, beta, mu)
    elif statistics == "fermi":
        out = g * K.occ_fermi(flat, beta, mu)
    else:
        raise ValueError(f"unknown statistics {statistics!r}")
    return float(out[0]) if eps_arr.ndim == 0 else out.reshape(eps_arr.shape)


def _weights(spectrum: TrapSpectrum, statistics: str, g: int) -> np.ndarray:
    w = spectrum.degeneracies
    return w if statistics == "bose" else g * w


def particle_count(spectrum: TrapSpectrum, beta: float, mu: float,
                   statistics: str, g: int = 1) -> float:
    e = spectrum.energies
    w = _weights(spectrum, statistics, g)
    if statistics == "bose":
        return K.count_bose(e, w, beta, mu)
    return K.count_fermi(e, w, beta, mu)


def solve_mu(spectrum: TrapSpectrum, beta: float, N: float, statistics: str,
             g: int = 1, tol_N: float = 1e-9) -> float:
    """Unique mu with Sum_i g_i n_i(mu) = N (count strictly increasing in mu).

    Bracketed Brent iteration; the bose bracket certifies
    mu in (eps_min - Lambda, eps_min - delta) by geometric growth/shrink,
    never stepping on the eps_min pole.
    """
    if not (beta > 0 and N > 0):
        raise ValueError("solve_mu requires beta > 0 and N > 0")
    e = spectrum.energies
    count = lambda mu: particle_count(spectrum, beta, mu, statistics, g) - N

    if statistics == "bose":
        gap = e[1] - e[0] if e.size > 1 else max(1.0, abs(e[0]) + 1.0)
        delta = 0.5 * gap
        while count(e[0] - delta) < 0.0:
            delta *= 0.125
            if delta < 1e-14 * gap:
                raise SolverError(
                    f"bose count stays below N={N} up to mu -> eps_min "
                    f"(count {count(e[0] - delta) + N:.6g} at the delta floor)")
        lam = max(1.0, 1.0 / beta)
        while count(e[0] - lam) > 0.0:
            lam *= 8.0
            if lam > 1e18:
                raise SolverError("bose count not bracketable from below")
        lo, hi = e[0] - lam, e[0] - delta
    elif statistics == "fermi":
        total = g * spectrum.n_states
        if total <= N:
            raise SolverError(
                f"spectrum holds only {total:g} states; cannot reach N={N} "
                f"(achievable range at this cutoff: 0 < N < {total:g})")
        lam = max(1.0, 1.0 / beta)
        while count(e[0] - lam) > 0.0:
            lam *= 8.0
            if lam > 1e18:
                raise SolverError("fermi count not bracketable from below")
        lo, hi = e[0] - lam, e[-1] + lam
        while count(hi) < 0.0:
            lam *= 8.0
            hi = e[-1] + lam
    else:
        raise ValueError(f"unknown statistics {statistics!r}")

    mu = brentq(count, lo, hi, **_BRENTQ_KW)
    resid = abs(count(mu))
    if resid > tol_N * N:
        raise SolverError(
            f"particle-count residual {resid:.3g} exceeds {tol_N * N:.3g} at "
            f"beta={beta:g} (achievable range {count(lo) + N:.6g}..{count(hi) + N:.6g})")
    return float(mu)


def solve_state(spectrum: TrapSpectrum, beta: float, N: float, statistics: str,
                g: int = 1, tol_N: float = 1e-9) -> GasState:
    """solve_mu plus occupations and average energy, bundled for capacity."""
    mu = solve_mu(spectrum, beta, N, statistics, g, tol_N)
    e, w = spectrum.energies, _weights(spectrum, statistics, g)
    if statistics == "bose":
        occ = K.occ_bose(e, beta, mu)
        E = K.energy_bose(e, w, beta, mu)
    else:
        occ = g * K.occ_fermi(e, beta, mu)
        E = K.energy_fermi(e, w, beta, mu)
    return GasState(spectrum, float(beta), mu, float(N), g, statistics, occ, E)


def average_energy(spectrum: TrapSpectrum, state: GasState) -> float:
    """E = Sum_i g_i n_i eps_i for the solved state."""
    e, w = spectrum.energies, _weights(spectrum, state.statistics, state.g)
    if state.statistics == "bose":
        return K.energy_bose(e, w, state.beta, state.mu)
    return K.energy_fermi(e, w, state.beta, state.mu)


def critical_temperatures(trap: TrapSpec, N: float, g: int = 1) -> tuple[float, float]:
    """Thermodynamic-limit axis normalizers for the pbc box (reduced units):

        T_c = (1/pi) (N/2.612)^(2/3)
        T_f = (1/4 pi^2) (6 pi^2 N / g)^(2/3)

    Used only to normalize temperature axes, matching the plotted curves.
    """
    if trap.kind != "box3d_pbc":
        raise SpectrumError(f"unsupported trap kind {trap.kind!r} "
                            "(critical_temperatures is defined for box3d_pbc)")
    t_c = (N / 2.612) ** (2.0 / 3.0) / math.pi
    t_f = (6.0 * math.pi**2 * N / g) ** (2.0 / 3.0) / (4.0 * math.pi**2)
    return t_c, t_f


def reference_temperatures(trap: TrapSpec, N: float, g: int = 1) -> tuple[float, float]:
    """(T_c, T_f) normalizers for any trap, from the semiclassical DOS
    rho = P eps^(eta-1):  N = P Gamma(eta) zeta(eta) T_c^eta  and
    E_f = (eta N / (P g))^(1/eta).  Reproduces critical_temperatures for the
    pbc box and T_c = omega (N/zeta(3))^(1/3), T_f = omega (6N/g)^(1/3) for
    the 3D harmonic trap."""
    if trap.kind == "box3d_pbc":
        return critical_temperatures(trap, N, g)
    eta = trap.eta()
    P = float(density_of_states(trap, 1.0))
    if eta <= 1.0:
        raise SpectrumError(f"no condensation normalizer for eta = {eta:g} <= 1")
    t_c = (N / (P * math.gamma(eta) * zeta(eta, 1))) ** (1.0 / eta)
    t_f = (eta * N / (P * g)) ** (1.0 / eta)
    return t_c, t_f


def adaptive_spectrum(trap: TrapSpec, beta_min: float, N: float, statistics: str,
                      g: int = 1, policy: CutoffPolicy = CutoffPolicy()) -> TrapSpectrum:
    """Grow the cutoff until the topmost level holds < tail_tol * N particles
    at the smallest beta of the sweep, so the formally infinite level sums
    carry a certified truncation tail."""
    e_max = policy.initial
    for _ in range(policy.max_steps):
        sp = build_spectrum(trap, e_max)
        enough = statistics == "bose" or g * sp.n_states > N
        if enough:
            mu = solve_mu(sp, beta_min, N, statistics, g)
            top = occupation(sp.energies[-1], beta_min, mu, statistics, g)
            if sp.degeneracies[-1] * top < policy.tail_tol * N:
                return sp
        e_max *= policy.factor
    raise SpectrumError(
        f"cutoff policy failed to certify the tail after {policy.max_steps} "
        f"doublings (reached cutoff {e_max:g})")
