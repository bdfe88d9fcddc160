"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the package's evaluation routes:
lattice degeneracies come from a direct triple loop, Fock-space entropies
from explicit enumeration of occupation tuples with a certified geometric
tail, so agreement is meaningful.
"""

import itertools
import math

import numpy as np
import pytest

from trapgas.spectrum import TrapSpec, TrapSpectrum, build_spectrum

LN2 = math.log(2.0)


# --- brute lattice degeneracies ----------------------------------------------

def brute_pbc_degeneracies(m_max: int) -> dict[int, int]:
    """r_3(m) for the full integer lattice by explicit triple loop."""
    counts: dict[int, int] = {}
    nmax = int(math.isqrt(m_max))
    for nx in range(-nmax, nmax + 1):
        for ny in range(-nmax, nmax + 1):
            for nz in range(-nmax, nmax + 1):
                m = nx * nx + ny * ny + nz * nz
                if m <= m_max:
                    counts[m] = counts.get(m, 0) + 1
    return counts


def brute_hard_degeneracies(m_max: int) -> dict[int, int]:
    """r_3(m) over strictly positive integers (hard-wall box, m = 4 eps)."""
    counts: dict[int, int] = {}
    nmax = int(math.isqrt(m_max))
    for nx in range(1, nmax + 1):
        for ny in range(1, nmax + 1):
            for nz in range(1, nmax + 1):
                m = nx * nx + ny * ny + nz * nz
                if m <= m_max:
                    counts[m] = counts.get(m, 0) + 1
    return counts


# --- Fock-space entropy oracles ----------------------------------------------

def _state_list(energies, degeneracies, g: int = 1):
    """Expand levels into individual quantum states (degeneracy x spin)."""
    out = []
    for e, w in zip(energies, degeneracies):
        out.extend([float(e)] * int(round(w)) * g)
    return out


def fock_entropy_bose(energies, degeneracies, beta, mu, n_max=40,
                      tail_tol=1e-12):
    """Von Neumann entropy (nats) of exp(-beta(H - mu N))/Xi by enumerating
    boson occupation tuples up to n_max per state.

    The truncation is certified: each state's Boltzmann ratio
    q = exp(-beta(eps - mu)) < 1 bounds its dropped weight by
    q^(n_max+1)/(1-q) relative to the state's own geometric series.
    """
    states = _state_list(energies, degeneracies)
    q = np.exp(-beta * (np.asarray(states) - mu))
    if np.any(q >= 1.0):
        raise ValueError("bose oracle requires mu < min(eps)")
    tail = q ** (n_max + 1) / (1.0 - q)
    assert float(np.sum(tail)) < tail_tol, "raise n_max: tail not certified"

    occ = np.arange(n_max + 1)
    # p(n1,...,nk) factorizes; build the joint via outer products
    weights = np.ones(1)
    number = np.zeros(1)
    for qs in q:
        w_s = qs ** occ
        weights = np.outer(weights, w_s).ravel()
        number = (number[:, None] + occ[None, :]).ravel()
    z = float(np.sum(weights))
    p = weights / z
    s = -float(np.sum(p * np.log(p, where=p > 0, out=np.zeros_like(p))))
    n_mean = float(np.sum(p * number))
    return s, n_mean


def fock_entropy_fermi(energies, degeneracies, beta, mu, g: int = 1):
    """Exact Fock-space entropy (nats) for fermions: occupations in {0,1}."""
    states = _state_list(energies, degeneracies, g)
    x = -beta * (np.asarray(states) - mu)
    weights = np.ones(1)
    number = np.zeros(1)
    for xs in x:
        w_s = np.array([1.0, math.exp(xs)])
        weights = np.outer(weights, w_s).ravel()
        number = (number[:, None] + np.array([0.0, 1.0])[None, :]).ravel()
    z = float(np.sum(weights))
    p = weights / z
    s = -float(np.sum(p * np.log(p, where=p > 0, out=np.zeros_like(p))))
    n_mean = float(np.sum(p * number))
    return s, n_mean


def make_spectrum(energies, degeneracies) -> TrapSpectrum:
    """Hand-built spectrum for oracle tests (box3d_pbc tag, arbitrary levels)."""
    e = np.ascontiguousarray(energies, dtype=float)
    w = np.ascontiguousarray(degeneracies, dtype=float)
    e.flags.writeable = False
    w.flags.writeable = False
    return TrapSpectrum(e, w, float(e[-1]), TrapSpec("box3d_pbc"))


# --- common fixtures ----------------------------------------------------------

@pytest.fixture(scope="session")
def pbc_trap():
    return TrapSpec("box3d_pbc")


@pytest.fixture(scope="session")
def pbc_spectrum_small(pbc_trap):
    return build_spectrum(pbc_trap, 64.0)
