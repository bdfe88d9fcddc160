"""Pure-numpy reference implementation of the hot thermodynamic kernels.

Every function here has a signature-identical twin in the compiled module
``trapgas._kernels._fast``; the package selects one backend at import time.
Inputs are 1-d float64 arrays: ``e`` energies, ``w`` total degeneracy per
level (shell degeneracy times spin factor g).  All entropies are in nats.

Numerical conventions:
  bose  n(x) = 1/(e^x - 1),            x = beta*(e - mu) > 0
  fermi f(x) = (1 - tanh(x/2))/2       (exact, stable both tails)
and the per-state entropies
  s_be(x) = x*n - log(1 - e^-x)
  s_fd(x) = log(1 + e^-|x|) + |x|/(e^|x| + 1)
which follow from s = -n ln n + (1 +- n) ln(1 +- n) by algebra.
"""

import numpy as np

BACKEND = "python"

# 1/expm1 underflows harmlessly past this; skip the levels instead of
# letting expm1 overflow and emit warnings.
_XBIG = 700.0


def _xb(e, w, beta, mu):
    x = beta * (e - mu)
    live = x < _XBIG
    return x[live], w[live]


def count_bose(e, w, beta, mu):
    x, wl = _xb(e, w, beta, mu)
    return float(np.sum(wl / np.expm1(x)))


def count_fermi(e, w, beta, mu):
    x = beta * (e - mu)
    return float(np.sum(w * 0.5 * (1.0 - np.tanh(0.5 * x))))


def energy_bose(e, w, beta, mu):
    x = beta * (e - mu)
    live = x < _XBIG
    return float(np.sum(w[live] * e[live] / np.expm1(x[live])))


def energy_fermi(e, w, beta, mu):
    x = beta * (e - mu)
    return float(np.sum(w * e * 0.5 * (1.0 - np.tanh(0.5 * x))))


def occ_bose(e, beta, mu):
    """Per-state Bose-Einstein occupation n_i (no degeneracy weight)."""
    x = beta * (e - mu)
    out = np.zeros_like(x)
    live = x < _XBIG
    out[live] = 1.0 / np.expm1(x[live])
    return out


def occ_fermi(e, beta, mu):
    """Per-state Fermi-Dirac filling f_i in [0, 1] (no g factor)."""
    x = beta * (e - mu)
    return 0.5 * (1.0 - np.tanh(0.5 * x))


def entropy_bose(e, w, beta, mu):
    """Sum_i w_i [ (1+n)ln(1+n) - n ln n ] = Sum_i w_i [x n - ln(1-e^-x)]."""
    x, wl = _xb(e, w, beta, mu)
    s = x / np.expm1(x) - np.log1p(-np.exp(-x))
    return float(np.sum(wl * s))


def entropy_fermi(e, w, beta, mu):
    """Sum_i w_i [ -f ln f - (1-f)ln(1-f) ], f = Fermi-Dirac filling."""
    ax = np.abs(beta * (e - mu))
    t = np.exp(-ax)
    s = np.log1p(t) + ax * t / (1.0 + t)
    return float(np.sum(w * s))


def log_xi_bose(e, w, beta, mu):
    """ln Xi = -Sum_i w_i ln(1 - e^{-x_i})."""
    x = beta * (e - mu)
    return float(-np.sum(w * np.log1p(-np.exp(-x))))


def log_xi_fermi(e, w, beta, mu):
    """ln Xi = Sum_i w_i ln(1 + e^{-x_i}), stable for either sign of x."""
    x = beta * (e - mu)
    return float(np.sum(w * (np.maximum(-x, 0.0) + np.log1p(np.exp(-np.abs(x))))))


# --- BCS mean-field kernels ------------------------------------------------
# Shell convention: Delta_k = Delta when |t_k - mu| <= d_eps, else 0, so
# E_k = sqrt(xi^2 + Delta^2) inside the shell and |xi| outside.  Outside the
# shell N_k = (1 - sgn(xi) tanh(beta|xi|/2))/2 is the Fermi-Dirac value
# bitwise (same expression as occ_fermi).

def bcs_occ(t, mu, delta, beta, d_eps):
    """Mean-field occupations N_k = (1 - (xi/E) tanh(beta E/2))/2."""
    xi = t - mu
    shell = np.abs(xi) <= d_eps
    ek = np.where(shell, np.hypot(xi, delta), np.abs(xi))
    ratio = np.divide(xi, ek, out=np.zeros_like(xi), where=ek > 0.0)
    return 0.5 * (1.0 - ratio * np.tanh(0.5 * beta * ek))


def bcs_count(t, w, mu, delta, beta, d_eps):
    return float(np.sum(w * bcs_occ(t, mu, delta, beta, d_eps)))


def bcs_energy(t, w, mu, delta, beta, d_eps):
    return float(np.sum(w * t * bcs_occ(t, mu, delta, beta, d_eps)))


def bcs_gap_sum(t, w, mu, delta, beta, d_eps):
    """S(Delta) = Sum_shell w_k tanh(beta E_k/2)/E_k, with the beta/2 limit at E=0."""
    xi = t - mu
    shell = np.abs(xi) <= d_eps
    if not np.any(shell):
        return 0.0
    ek = np.hypot(xi[shell], delta)
    term = np.full_like(ek, 0.5 * beta)
    pos = ek > 0.0
    term[pos] = np.tanh(0.5 * beta * ek[pos]) / ek[pos]
    return float(np.sum(w[shell] * term))


def bcs_entropy(t, w, mu, delta, beta, d_eps):
    """Sum_k w_k h(N_k) in nats, h the binary entropy.

    Modes with Delta_k = 0 reduce to the Fermi-Dirac entropy and are summed
    through the same stable expression as entropy_fermi, so a Delta = 0
    solution reproduces the noninteracting value bitwise.
    """
    xi = t - mu
    shell = (np.abs(xi) <= d_eps) & (delta > 0.0)
    ax = np.abs(beta * xi[~shell])
    tt = np.exp(-ax)
    s_out = float(np.sum(w[~shell] * (np.log1p(tt) + ax * tt / (1.0 + tt))))
    if not np.any(shell):
        return s_out
    x = xi[shell]
    ek = np.hypot(x, delta)
    th = (x / ek) * np.tanh(0.5 * beta * ek)
    n = 0.5 * (1.0 - th)
    m = 0.5 * (1.0 + th)
    s = np.zeros_like(n)
    pos = n > 0.0
    s[pos] -= n[pos] * np.log(n[pos])
    pos = m > 0.0
    s[pos] -= m[pos] * np.log(m[pos])
    return s_out + float(np.sum(w[shell] * s))
