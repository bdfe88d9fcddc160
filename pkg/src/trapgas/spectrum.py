"""Single-particle spectra, densities of states and smooth sums S_k, D_k.

Trap kinds and reduced-unit level formulas:

  box3d_pbc      eps = n_x^2 + n_y^2 + n_z^2,  n_i = 0, +-1, ... (unit eps0)
  box3d_hard     eps = (n_x^2 + n_y^2 + n_z^2)/4,  n_i = 1, 2, ...
  harmonic_iso   eps = q * omega, q = 0, 1, ..., degeneracy C(q+d-1, d-1)
                 (zero-point dropped; a constant shift moves mu only)
  power_law      V ~ r^gamma in d dimensions; exactly enumerable for
                 gamma = 2 (harmonic ladder, unit frequency) and
                 gamma = inf (d-dim pbc lattice, box units); otherwise the
                 density-of-states route applies.

Degeneracies are stored explicitly (shell counts are large); downstream
sums weight every level by g_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

# Matched characteristic length: hbar*omega = hbar^2/(m L^2) gives
# omega = 1/(2 pi^2) in units of eps0 = 2 pi^2 hbar^2/(m L^2).
OMEGA_MATCHED = 1.0 / (2.0 * math.pi**2)

_KINDS = ("box3d_pbc", "box3d_hard", "harmonic_iso", "power_law")


class SpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class TrapSpec:
    """Trap family and its parameters (characteristic scale folded into the unit)."""

    kind: str
    d: int = 3
    gamma: float = math.inf
    omega: float = OMEGA_MATCHED

    def eta(self) -> float:
        """Semiclassical exponent eta = d/2 + d/gamma (rho ~ eps^(eta-1))."""
        g = math.inf if self.kind.startswith("box") else self.gamma
        if self.kind == "harmonic_iso":
            g = 2.0
        return self.d / 2.0 + (0.0 if math.isinf(g) else self.d / g)


def trap_violations(trap: TrapSpec) -> list[str]:
    bad = []
    if trap.kind not in _KINDS:
        bad.append(f"unknown trap kind {trap.kind!r}; expected one of {_KINDS}")
        return bad
    if trap.kind in ("box3d_pbc", "box3d_hard") and trap.d != 3:
        bad.append(f"{trap.kind} is three-dimensional")
    if trap.kind in ("harmonic_iso", "power_law") and trap.d not in (1, 2, 3):
        bad.append("d must be in {1, 2, 3}")
    if trap.kind == "power_law" and not trap.gamma > 0:
        bad.append("power_law requires gamma > 0")
    if trap.kind == "harmonic_iso" and not trap.omega > 0:
        bad.append("harmonic_iso requires omega > 0")
    return bad


def _require_valid(trap: TrapSpec) -> None:
    bad = trap_violations(trap)
    if bad:
        raise SpectrumError("; ".join(bad))


@dataclass(frozen=True)
class CutoffPolicy:
    """Adaptive cutoff: grow the spectrum from `initial` by `factor` until the
    topmost level's occupation is below tail_tol * N at the smallest beta of
    the sweep (enforced by statistics.adaptive_spectrum)."""

    tail_tol: float = 1e-9
    initial: float = 64.0
    factor: float = 2.0
    max_steps: int = 40


@dataclass(frozen=True, eq=False)
class TrapSpectrum:
    energies: np.ndarray      # strictly increasing, reduced units
    degeneracies: np.ndarray  # float-valued exact integers, all >= 1
    cutoff_energy: float
    trap: TrapSpec

    @property
    def levels(self):
        """Sorted (energy, degeneracy) pairs."""
        return list(zip(self.energies.tolist(), self.degeneracies.tolist()))

    @property
    def n_states(self) -> float:
        return float(self.degeneracies.sum())


def _freeze(e: np.ndarray, g: np.ndarray, cutoff: float, trap: TrapSpec) -> TrapSpectrum:
    e = np.ascontiguousarray(e, dtype=float)
    g = np.ascontiguousarray(g, dtype=float)
    e.flags.writeable = False
    g.flags.writeable = False
    return TrapSpectrum(e, g, float(cutoff), trap)


def _sq_rep_counts(max_m: int, n_dim: int, positive: bool) -> np.ndarray:
    """r_d(m) = number of integer d-tuples with sum of squares m <= max_m.

    Built by repeated exact convolution with the one-axis counts
    r_1(k^2) = 1 (positive axes) or {1 at 0, 2 at k^2>0} (full lattice);
    O(sqrt(max_m) * max_m) additions, exact in float64.
    """
    nmax = int(math.isqrt(max_m))
    r = np.zeros(max_m + 1)
    if positive:
        for k in range(1, nmax + 1):
            r[k * k] = 1.0
    else:
        r[0] = 1.0
        for k in range(1, nmax + 1):
            r[k * k] = 2.0
    out = r
    for _ in range(n_dim - 1):
        nxt = np.zeros(max_m + 1)
        start = 1 if positive else 0
        for k in range(start, nmax + 1):
            kk = k * k
            if kk > max_m:
                break
            w = 1.0 if (positive or k == 0) else 2.0
            nxt[kk:] += w * out[: max_m + 1 - kk]
        out = nxt
    return out


def _harmonic_degeneracy(q: np.ndarray, d: int) -> np.ndarray:
    # C(q+d-1, d-1): 1, q+1, (q+1)(q+2)/2 for d = 1, 2, 3
    if d == 1:
        return np.ones_like(q, dtype=float)
    if d == 2:
        return q + 1.0
    return 0.5 * (q + 1.0) * (q + 2.0)


def build_spectrum(trap: TrapSpec, cutoff) -> TrapSpectrum:
    """All distinct levels up to the cutoff energy with exact degeneracies.

    `cutoff` is a CutoffPolicy (its `initial` energy is used; adaptive
    growth is driven by statistics.adaptive_spectrum) or a plain energy.
    """
    _require_valid(trap)
    e_max = float(cutoff.initial if isinstance(cutoff, CutoffPolicy) else cutoff)
    if not e_max >= 0.0:
        raise SpectrumError(f"cutoff energy must be nonnegative, got {e_max}")

    kind, d = trap.kind, trap.d
    if kind == "power_law":
        if trap.gamma == 2.0:
            kind = "ladder"
        elif math.isinf(trap.gamma):
            kind = "lattice"
        else:
            raise SpectrumError(
                "power_law spectra are enumerable only for gamma in {2, inf}; "
                "use density_of_states/dos_sums for general gamma")

    if kind in ("box3d_pbc", "lattice"):
        m = _sq_rep_counts(int(math.floor(e_max)), d if kind == "lattice" else 3,
                           positive=False)
        idx = np.nonzero(m)[0]
        return _freeze(idx.astype(float), m[idx], e_max, trap)
    if kind == "box3d_hard":
        mm = int(math.floor(4.0 * e_max))
        m = _sq_rep_counts(mm, 3, positive=True)
        idx = np.nonzero(m)[0]
        if idx.size == 0:
            raise SpectrumError(
                f"cutoff {e_max} below the lowest hard-wall level 0.75")
        return _freeze(idx / 4.0, m[idx], e_max, trap)
    # harmonic ladder (harmonic_iso, or power_law gamma=2 at unit frequency)
    omega = trap.omega if kind == "harmonic_iso" else 1.0
    q = np.arange(math.floor(e_max / omega) + 1.0)
    return _freeze(q * omega, _harmonic_degeneracy(q, d), e_max, trap)


def density_of_states(trap: TrapSpec, eps) -> np.ndarray | float:
    """Semiclassical rho(eps) = pi^(d/2 - d/gamma) * eps^(eta-1) / Gamma(eta).

    The prefactor convention is anchored by the two exactly enumerable
    family members: gamma = inf reproduces the d-dim pbc lattice counting
    (d=3: rho = 2 pi sqrt(eps)) and gamma = 2 the unit-frequency ladder
    (d=3: rho = eps^2/2); harmonic_iso divides by omega^d.
    """
    _require_valid(trap)
    eta = trap.eta()
    d = trap.d
    gamma = {"box3d_pbc": math.inf, "box3d_hard": math.inf,
             "harmonic_iso": 2.0}.get(trap.kind, trap.gamma)
    scale = trap.omega**d if trap.kind == "harmonic_iso" else 1.0
    lead = math.pi ** (d / 2.0 - (0.0 if math.isinf(gamma) else d / gamma))
    eps = np.asarray(eps, dtype=float)
    out = lead * np.power(eps, eta - 1.0) / (math.exp(gammaln(eta)) * scale)
    return out if out.ndim else float(out)


# --- smooth sums -------------------------------------------------------------

@dataclass(frozen=True)
class SmoothSums:
    """S_k = sum_i g_i e^{-k beta eps_i}, D_k = sum_i g_i beta eps_i e^{-k beta eps_i}.

    `S`/`D` are the authoritative direct truncated sums; `S_reference` and
    `D_reference` come from the exact resummation (theta functions for the
    boxes, closed geometric form for the harmonic ladder) or, for power-law
    traps, from the density-of-states integral.
    """

    S: float
    D: float
    S_reference: float
    D_reference: float


def _theta3(a: float) -> float:
    """theta_3(a) = sum_{n in Z} e^{-a n^2}, Poisson-resummed for small a."""
    if a < 0.05:
        return math.sqrt(math.pi / a) * _theta3(math.pi**2 / a)
    total, n = 1.0, 1
    while True:
        term = 2.0 * math.exp(-a * n * n)
        total += term
        if term < 1e-18 * total:
            return total
        n += 1


def _theta3p(a: float) -> float:
    """-d theta_3/da = sum_{n in Z} n^2 e^{-a n^2}."""
    if a < 0.05:
        b = math.pi**2 / a
        return math.sqrt(math.pi) * (
            0.5 * a**-1.5 * _theta3(b) - math.pi**2 * a**-2.5 * _theta3p(b))
    total, n = 0.0, 1
    while True:
        term = 2.0 * n * n * math.exp(-a * n * n)
        total += term
        if term < 1e-18 * (total + 1e-300):
            return total
        n += 1


def dos_sums(trap: TrapSpec, beta: float, k: int) -> tuple[float, float]:
    """S_k, D_k from the density-of-states integral (any power-law trap).

    S_k = A Gamma(eta) / (k beta)^eta with A the density_of_states prefactor,
    and D_k = eta S_k / k.
    """
    _require_valid(trap)
    eta = trap.eta()
    gamma = {"box3d_pbc": math.inf, "box3d_hard": math.inf,
             "harmonic_iso": 2.0}.get(trap.kind, trap.gamma)
    scale = trap.omega**trap.d if trap.kind == "harmonic_iso" else 1.0
    lead = math.pi ** (trap.d / 2.0 - (0.0 if math.isinf(gamma) else trap.d / gamma))
    s = lead / ((k * beta) ** eta * scale)
    return s, eta * s / k


def smooth_sums(trap: TrapSpec, beta: float, k: int,
                tail_tol: float = 1e-12) -> SmoothSums:
    """Direct truncated S_k, D_k plus the resummation/DOS reference value.

    The direct sum extends its cutoff until one doubling changes the result
    by less than tail_tol relatively; raises if that cannot be certified.
    """
    _require_valid(trap)
    if not (beta > 0 and k in (1, 2, 3)):
        raise SpectrumError("smooth_sums requires beta > 0 and k in {1,2,3}")

    kind = trap.kind
    if kind == "box3d_pbc" or (kind == "power_law" and math.isinf(trap.gamma)):
        dim = 3 if kind == "box3d_pbc" else trap.d
        t3, t3p = _theta3(k * beta), _theta3p(k * beta)
        s_ref = t3**dim
        d_ref = dim * beta * t3p * t3 ** (dim - 1)
    elif kind == "box3d_hard":
        a = k * beta
        h = 0.5 * (_theta3(a / 4.0) - 1.0)
        hp = _theta3p(a / 4.0) / 8.0
        s_ref = h**3
        d_ref = 3.0 * beta * hp * h**2
    elif kind == "harmonic_iso" or (kind == "power_law" and trap.gamma == 2.0):
        dim = trap.d
        omega = trap.omega if kind == "harmonic_iso" else 1.0
        qk = math.exp(-k * beta * omega)
        s_ref = (1.0 - qk) ** -dim
        d_ref = dim * beta * omega * qk / (1.0 - qk) * s_ref
    else:
        raise SpectrumError(
            "power_law smooth sums are enumerable only for gamma in {2, inf}; "
            "use dos_sums for general gamma")

    # direct truncated sums with a doubling tail certificate
    e_max = max(8.0 / (k * beta), 8.0)
    s_old = d_old = None
    for _ in range(60):
        sp = build_spectrum(trap, e_max)
        x = k * beta * sp.energies
        live = x < 700.0
        w = sp.degeneracies[live] * np.exp(-x[live])
        s_dir = float(np.sum(w))
        d_dir = float(np.sum(w * beta * sp.energies[live]))
        if s_old is not None and abs(s_dir - s_old) <= tail_tol * s_dir \
                and abs(d_dir - d_old) <= tail_tol * max(d_dir, 1e-300):
            return SmoothSums(s_dir, d_dir, s_ref, d_ref)
        s_old, d_old = s_dir, d_dir
        e_max *= 2.0
    raise SpectrumError("cutoff insufficient for requested tail tolerance")


def dump_spectrum(spectrum: TrapSpectrum):
    """Rows (index, energy, degeneracy) for the CSV spectrum dump."""
    return [(i, float(e), int(g)) for i, (e, g) in
            enumerate(zip(spectrum.energies, spectrum.degeneracies))]
