"""Spectrum construction, degeneracies, densities of states, smooth sums."""

import math

import mpmath as mp
import numpy as np
import pytest

from trapgas.spectrum import CutoffPolicy, OMEGA_MATCHED, SpectrumError, \
    TrapSpec, build_spectrum, density_of_states, dos_sums, dump_spectrum, \
    smooth_sums, trap_violations

from conftest import brute_hard_degeneracies, brute_pbc_degeneracies


def test_pbc_cutoff_2_example():
    sp = build_spectrum(TrapSpec("box3d_pbc"), 2.0)
    assert sp.levels == [(0.0, 1.0), (1.0, 6.0), (2.0, 12.0)]


def test_pbc_cutoff_policy_uses_initial():
    sp = build_spectrum(TrapSpec("box3d_pbc"), CutoffPolicy(initial=2.0))
    assert sp.cutoff_energy == 2.0
    assert sp.levels == [(0.0, 1.0), (1.0, 6.0), (2.0, 12.0)]


def test_pbc_low_shell_degeneracies():
    sp = build_spectrum(TrapSpec("box3d_pbc"), 9.0)
    assert sp.energies.tolist() == [0, 1, 2, 3, 4, 5, 6, 8, 9]
    assert sp.degeneracies.tolist() == [1, 6, 12, 8, 6, 24, 24, 12, 30]
    assert np.cumsum(sp.degeneracies).tolist() == \
        [1, 7, 19, 27, 33, 57, 81, 93, 123]


def test_pbc_degeneracies_match_triple_loop():
    sp = build_spectrum(TrapSpec("box3d_pbc"), 80.0)
    brute = brute_pbc_degeneracies(80)
    got = dict(zip(sp.energies.astype(int).tolist(),
                   sp.degeneracies.astype(int).tolist()))
    assert got == {m: c for m, c in brute.items() if c}


def test_pbc_gaps_are_exactly_the_three_square_exceptions():
    # m is a sum of three squares iff m != 4^a (8b + 7)
    def representable(m):
        while m % 4 == 0 and m > 0:
            m //= 4
        return m % 8 != 7
    sp = build_spectrum(TrapSpec("box3d_pbc"), 200.0)
    present = set(sp.energies.astype(int).tolist())
    for m in range(201):
        assert (m in present) == representable(m), m


def test_hard_wall_levels():
    sp = build_spectrum(TrapSpec("box3d_hard"), 3.0)
    # lowest level (1,1,1): 3/4; first excited (2,1,1) x3: 6/4
    assert sp.levels[0] == (0.75, 1.0)
    assert sp.levels[1] == (1.5, 3.0)
    brute = brute_hard_degeneracies(12)
    got = dict(zip((4.0 * sp.energies).astype(int).tolist(),
                   sp.degeneracies.astype(int).tolist()))
    assert got == {m: c for m, c in brute.items() if c}


def test_hard_wall_cutoff_below_ground_raises():
    with pytest.raises(SpectrumError, match="0.75"):
        build_spectrum(TrapSpec("box3d_hard"), 0.5)


def test_harmonic_binomial_degeneracies():
    sp = build_spectrum(TrapSpec("harmonic_iso", omega=1.0), 4.0)
    assert sp.degeneracies.tolist() == [1, 3, 6, 10, 15]
    assert sp.energies.tolist() == [0, 1, 2, 3, 4]
    sp2 = build_spectrum(TrapSpec("harmonic_iso", d=2, omega=0.5), 2.0)
    assert sp2.energies.tolist() == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert sp2.degeneracies.tolist() == [1, 2, 3, 4, 5]


def test_power_law_enumerable_members():
    ladder = build_spectrum(TrapSpec("power_law", d=3, gamma=2.0), 3.0)
    assert ladder.degeneracies.tolist() == [1, 3, 6, 10]
    lattice = build_spectrum(TrapSpec("power_law", d=3, gamma=math.inf), 2.0)
    assert lattice.levels == [(0.0, 1.0), (1.0, 6.0), (2.0, 12.0)]
    lattice1d = build_spectrum(TrapSpec("power_law", d=1, gamma=math.inf), 9.0)
    assert lattice1d.levels == [(0.0, 1.0), (1.0, 2.0), (4.0, 2.0), (9.0, 2.0)]


def test_power_law_general_gamma_not_enumerable():
    with pytest.raises(SpectrumError, match="gamma"):
        build_spectrum(TrapSpec("power_law", d=3, gamma=1.5), 10.0)


def test_trap_violations():
    assert trap_violations(TrapSpec("box3d_pbc")) == []
    assert any("unknown trap kind" in v
               for v in trap_violations(TrapSpec("box2d_pbc")))
    assert any("three-dimensional" in v
               for v in trap_violations(TrapSpec("box3d_pbc", d=2)))
    assert any("gamma" in v
               for v in trap_violations(TrapSpec("power_law", gamma=-1.0)))


def test_spectrum_arrays_frozen(pbc_spectrum_small):
    with pytest.raises(ValueError):
        pbc_spectrum_small.energies[0] = 1.0


def test_density_of_states_anchors():
    # pbc box: rho = 2 pi sqrt(eps)
    assert density_of_states(TrapSpec("box3d_pbc"), 4.0) == \
        pytest.approx(2.0 * math.pi * 2.0, rel=1e-14)
    # gamma = inf power law is the same counting
    assert density_of_states(TrapSpec("power_law", d=3, gamma=math.inf), 4.0) \
        == pytest.approx(2.0 * math.pi * 2.0, rel=1e-14)
    # unit-frequency ladder: rho = eps^2/2
    assert density_of_states(TrapSpec("power_law", d=3, gamma=2.0), 3.0) == \
        pytest.approx(4.5, rel=1e-14)
    # harmonic trap divides by omega^d
    om = OMEGA_MATCHED
    assert density_of_states(TrapSpec("harmonic_iso", omega=om), 3.0) == \
        pytest.approx(4.5 / om**3, rel=1e-14)


def test_density_of_states_exponent_general_gamma():
    trap = TrapSpec("power_law", d=3, gamma=1.0)
    eta = trap.eta()
    assert eta == pytest.approx(4.5)
    r1, r2 = density_of_states(trap, np.array([1.0, 2.0]))
    assert r2 / r1 == pytest.approx(2.0 ** (eta - 1.0), rel=1e-12)


def test_density_of_states_histogram_pbc():
    # integrated level count in [20, 30) agrees with the DOS within 5%
    sp = build_spectrum(TrapSpec("box3d_pbc"), 30.0)
    sel = (sp.energies >= 20.0) & (sp.energies < 30.0)
    states = float(sp.degeneracies[sel].sum())
    integral = (4.0 * math.pi / 3.0) * (30.0**1.5 - 20.0**1.5)
    assert abs(states - integral) / integral < 0.05


def _theta3_mp(a):
    return mp.jtheta(3, 0, mp.e ** (-a))


def _theta3p_mp(a):
    return -mp.diff(lambda x: mp.jtheta(3, 0, mp.e ** (-x)), a)


@pytest.mark.parametrize("beta", [0.09221537, 0.5, 2.0])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_smooth_sums_pbc_against_mpmath(beta, k):
    mp.mp.dps = 30
    ss = smooth_sums(TrapSpec("box3d_pbc"), beta, k)
    t3 = _theta3_mp(k * beta)
    t3p = _theta3p_mp(k * beta)
    assert ss.S == pytest.approx(float(t3**3), rel=1e-10)
    assert ss.D == pytest.approx(float(3.0 * beta * t3p * t3**2), rel=1e-9)
    assert ss.S_reference == pytest.approx(ss.S, rel=1e-9)
    assert ss.D_reference == pytest.approx(ss.D, rel=1e-8)


def test_smooth_sums_hard_wall_against_mpmath():
    mp.mp.dps = 30
    beta = 0.3
    ss = smooth_sums(TrapSpec("box3d_hard"), beta, 1)
    h = (_theta3_mp(beta / 4) - 1) / 2
    hp = _theta3p_mp(beta / 4) / 8
    assert ss.S == pytest.approx(float(h**3), rel=1e-10)
    assert ss.D == pytest.approx(float(3 * beta * hp * h**2), rel=1e-9)


def test_smooth_sums_harmonic_closed_form():
    om = 0.05
    ss = smooth_sums(TrapSpec("harmonic_iso", omega=om), 2.0, 1)
    q = math.exp(-2.0 * om)
    assert ss.S_reference == pytest.approx((1 - q) ** -3, rel=1e-14)
    assert ss.S == pytest.approx(ss.S_reference, rel=1e-9)
    assert ss.D == pytest.approx(ss.D_reference, rel=1e-9)


def test_smooth_sums_match_dos_in_continuum_limit():
    # Poisson-resummed theta sums collapse onto the DOS integral as beta -> 0
    trap = TrapSpec("box3d_pbc")
    ss = smooth_sums(trap, 0.02, 1)
    s_dos, d_dos = dos_sums(trap, 0.02, 1)
    assert ss.S == pytest.approx(s_dos, rel=1e-12)
    assert ss.D == pytest.approx(d_dos, rel=1e-12)


def test_dos_sums_ratio_identity():
    trap = TrapSpec("power_law", d=2, gamma=1.5)
    s1, d1 = dos_sums(trap, 0.7, 1)
    s2, d2 = dos_sums(trap, 0.7, 2)
    eta = trap.eta()
    assert d1 / s1 == pytest.approx(eta, rel=1e-13)
    assert s2 / s1 == pytest.approx(2.0 ** -eta, rel=1e-13)
    assert d2 / s2 == pytest.approx(eta / 2.0, rel=1e-13)


def test_smooth_sums_rejects_bad_k():
    with pytest.raises(SpectrumError):
        smooth_sums(TrapSpec("box3d_pbc"), 1.0, 4)


def test_dump_spectrum_rows():
    sp = build_spectrum(TrapSpec("box3d_pbc"), 2.0)
    assert dump_spectrum(sp) == [(0, 0.0, 1), (1, 1.0, 6), (2, 2.0, 12)]
