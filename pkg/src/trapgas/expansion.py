"""Third-order high-temperature expansion of both capacities.

Expansion parameter x = N / S_1 with

  S_k = Sum_i g_i e^{-k beta eps_i},      D_k = beta Sum_i g_i eps_i e^{-k beta eps_i},

so D_k = beta <eps>_{k beta} S_k.  The capacity series (nats, divided by
ln 2 for bits) is

  C = alpha_1 x + alpha_2 x^2 + alpha_3 x^3 + beta_1 x ln x + beta_2 x^2 ln x + O(x^4).

Two coefficient conventions are recorded.  `closed_form` holds the compact
closed-form expressions; the exact identities (alpha_1 and alpha_3 shared,
alpha_2 antisymmetric, beta_1 = -S_1, beta_2^b = 0, beta_2^f = 2 S_2) are
stated on this set.  `series_consistent` holds the coefficients that make
the truncated series reproduce direct capacities to O(x^4); it differs in
alpha_3 and has beta_2 = 0 for both statistics (the x^2 ln x terms cancel
once the fugacity series is substituted consistently).  series_capacity
uses `series_consistent`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .spectrum import SpectrumError, TrapSpec, TrapSpectrum, dos_sums, smooth_sums

LN2 = math.log(2.0)

X_HIGH_T = 0.3  # empirical radius where the O(x^4) residual scaling holds


@dataclass(frozen=True)
class CoefficientSet:
    alpha1: float
    alpha2_bose: float
    alpha2_fermi: float
    alpha3: float
    beta1: float
    beta2_bose: float
    beta2_fermi: float

    def alphas(self, statistics: str) -> tuple[float, float, float]:
        a2 = self.alpha2_bose if statistics == "bose" else self.alpha2_fermi
        return (self.alpha1, a2, self.alpha3)

    def betas(self, statistics: str) -> tuple[float, float]:
        b2 = self.beta2_bose if statistics == "bose" else self.beta2_fermi
        return (self.beta1, b2)


@dataclass
class ExpansionReport:
    """S_k, D_k and both alpha/beta sets at one beta; series fields are
    filled in by series_capacity."""

    beta: float
    S: tuple[float, float, float]
    D: tuple[float, float, float]
    closed_form: CoefficientSet
    series_consistent: CoefficientSet
    alpha2_bose_dos_form: float  # S_2 (1 - beta<eps>_beta + beta<eps>_2beta)
    x: float | None = None
    C_series_bose: float | None = None
    C_series_fermi: float | None = None
    systematic: bool | None = None
    theorem_verdict: str | None = None


def sums_from_levels(energies, degeneracies, beta: float, k: int) -> tuple[float, float]:
    """Direct S_k, D_k from an explicit level list."""
    e = np.asarray(energies, dtype=float)
    w = np.asarray(degeneracies, dtype=float)
    bz = np.exp(-k * beta * e)
    return float(np.sum(w * bz)), float(beta * np.sum(w * e * bz))


def _sums(source, beta: float, k: int, tail_tol: float) -> tuple[float, float]:
    if isinstance(source, TrapSpectrum):
        return sums_from_levels(source.energies, source.degeneracies, beta, k)
    if isinstance(source, TrapSpec):
        try:
            ss = smooth_sums(source, beta, k, tail_tol=tail_tol)
            return ss.S, ss.D
        except SpectrumError:
            # general power-law exponent: only the density-of-states route
            return dos_sums(source, beta, k)
    raise TypeError(f"expected TrapSpec or TrapSpectrum, got {type(source).__name__}")


def expansion_coefficients(source, beta: float, N: float | None = None,
                           tail_tol: float = 1e-12) -> ExpansionReport:
    """Evaluate S_1..S_3, D_1..D_3 and both coefficient sets at beta.

    `source` is a TrapSpec (smooth sums with the reference cross-check, or
    the density-of-states integrals for general power-law exponents) or an
    explicit TrapSpectrum (direct sums over the stored levels).  When N is
    given, x = N/S_1 is recorded and a warning is issued for x >= 0.3.
    """
    s1, d1 = _sums(source, beta, 1, tail_tol)
    s2, d2 = _sums(source, beta, 2, tail_tol)
    s3, d3 = _sums(source, beta, 3, tail_tol)
    if s1 <= 0.0:
        raise SpectrumError("S_1 must be positive")

    alpha1 = s1 + d1
    alpha2_b = s2 / 2.0 - s2 * d1 / s1 + d2
    alpha3_closed = -3.0 * s2 + s3 / 3.0 + 2.0 * s2 ** 2 / s1 \
        + (2.0 * s2 ** 2 - s1 * s3) * d1 / s1 ** 2 - 2.0 * s2 * d2 / s1 + d3
    alpha3_series = -s2 ** 2 / (2.0 * s1) + s3 / 3.0 \
        + (2.0 * s2 ** 2 - s1 * s3) * d1 / s1 ** 2 - 2.0 * s2 * d2 / s1 + d3
    closed = CoefficientSet(alpha1, alpha2_b, -alpha2_b, alpha3_closed,
                            -s1, 0.0, 2.0 * s2)
    series = CoefficientSet(alpha1, alpha2_b, -alpha2_b, alpha3_series,
                            -s1, 0.0, 0.0)
    alt = s2 * (1.0 - d1 / s1 + d2 / s2)

    report = ExpansionReport(beta, (s1, s2, s3), (d1, d2, d3), closed, series, alt)
    if N is not None:
        report.x = N / s1
        if report.x >= X_HIGH_T:
            warnings.warn(f"x = N/S_1 = {report.x:.3g} is outside the "
                          f"high-temperature regime (x < {X_HIGH_T})")
    return report


def series_capacity(report: ExpansionReport, N: float, statistics: str) -> float:
    """Truncated-series capacity in bits at the report's beta.

    C_bits = [sum_i alpha_i x^i + beta_1 x ln x + beta_2 x^2 ln x] / ln 2
    with x = N/S_1 and the x ln x -> 0 convention at x = 0.  Uses the
    series-consistent coefficient set."""
    if statistics not in ("bose", "fermi"):
        raise ValueError(f"statistics must be bose or fermi, got {statistics!r}")
    s1 = report.S[0]
    x = N / s1
    if x >= X_HIGH_T:
        warnings.warn(f"x = N/S_1 = {x:.3g} is outside the "
                      f"high-temperature regime (x < {X_HIGH_T})")
    cs = report.series_consistent
    a1, a2, a3 = cs.alphas(statistics)
    b1, b2 = cs.betas(statistics)
    nats = a1 * x + a2 * x * x + a3 * x ** 3 \
        + b1 * float(xlogy(x, x)) + b2 * x * float(xlogy(x, x))
    bits = nats / LN2
    report.x = x
    if statistics == "bose":
        report.C_series_bose = bits
    else:
        report.C_series_fermi = bits
    return bits


def fugacity_series(report: ExpansionReport, N: float, statistics: str) -> float:
    """Fugacity z = e^{beta mu} to O(x^3) from the number constraint.

    Inverting N = sum_k (+-)^{k+1} S_k z^k gives
      bose:  z = x - r x^2 + (2 r^2 - s) x^3
      fermi: z = x + r x^2 + (2 r^2 - s) x^3
    with r = S_2/S_1, s = S_3/S_1."""
    s1, s2, s3 = report.S
    r, s = s2 / s1, s3 / s1
    x = N / s1
    sign = -1.0 if statistics == "bose" else 1.0
    return x + sign * r * x * x + (2.0 * r * r - s) * x ** 3


def systematic(gamma: float, d: int) -> bool:
    """Truth of 1/gamma + 1/2 > 1/d (expansion systematic for this trap)."""
    inv_gamma = 0.0 if math.isinf(gamma) else 1.0 / gamma
    return inv_gamma + 0.5 > 1.0 / d


systematicity = systematic


@dataclass(frozen=True)
class TheoremRow:
    beta: float
    x: float
    alpha2_bose: float
    alpha2_fermi: float
    sign_ok: bool                      # alpha2_fermi - alpha2_bose >= 0
    series_margin_bits: float          # C_fd - C_be at series level
    direct_margin_bits: float | None   # cross-check when levels are enumerable
    verdict: str


def theorem_check(trap: TrapSpec, beta_grid, N: float, g: int = 1,
                  direct: bool = True) -> list[TheoremRow]:
    """Per-beta verdict table for the fermion-vs-boson comparison.

    For systematic traps (1/gamma + 1/2 > 1/d) the fermionic series must sit
    at or above the bosonic one, driven by alpha2_fermi - alpha2_bose =
    -2 alpha2_bose >= 0; otherwise rows carry "out of theorem scope".  When
    the trap's levels are enumerable and `direct` is set, the margin of the
    direct capacities is reported alongside."""
    rows = []
    in_scope = systematic(trap.gamma, trap.d) if trap.kind == "power_law" \
        else systematic(2.0 if trap.kind == "harmonic_iso" else math.inf, trap.d)
    for beta in np.asarray(beta_grid, dtype=float):
        report = expansion_coefficients(trap, float(beta))
        cs = report.closed_form
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            c_be = series_capacity(report, N, "bose")
            c_fd = series_capacity(report, N, "fermi")
        margin_direct = None
        if direct and in_scope:
            margin_direct = _direct_margin(trap, float(beta), N, g)
        if not in_scope:
            verdict = "out of theorem scope"
        elif cs.alpha2_fermi >= cs.alpha2_bose and c_fd >= c_be:
            verdict = "fermi >= bose"
        else:
            verdict = "violated"
        rows.append(TheoremRow(float(beta), report.x if report.x is not None
                               else N / report.S[0], cs.alpha2_bose,
                               cs.alpha2_fermi,
                               cs.alpha2_fermi - cs.alpha2_bose >= 0.0,
                               c_fd - c_be, margin_direct, verdict))
    return rows


def _direct_margin(trap: TrapSpec, beta: float, N: float, g: int) -> float | None:
    from .capacity import capacity_bose, capacity_fermi
    from .statistics import adaptive_spectrum, solve_state
    try:
        sp = adaptive_spectrum(trap, beta, N, "fermi", g)
    except SpectrumError:
        return None
    c_be = capacity_bose(solve_state(sp, beta, N, "bose"))
    c_fd = capacity_fermi(solve_state(sp, beta, N, "fermi", g))
    return c_fd - c_be
