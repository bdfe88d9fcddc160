"""High-temperature expansion coefficients, series capacity, theorem check."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trapgas.capacity import capacity
from trapgas.expansion import X_HIGH_T, expansion_coefficients, fugacity_series, \
    series_capacity, sums_from_levels, systematic, systematicity, theorem_check
from trapgas.spectrum import OMEGA_MATCHED, TrapSpec
from trapgas.statistics import adaptive_spectrum, critical_temperatures, \
    solve_state

from conftest import make_spectrum

T_C_100 = 3.6157745663139482


# --- coefficient identities -----------------------------------------------------

def _raw_sums(e, w, beta, k):
    e = np.asarray(e, dtype=float)
    w = np.asarray(w, dtype=float)
    s = float(np.sum(w * np.exp(-k * beta * e)))
    d = float(beta * np.sum(w * e * np.exp(-k * beta * e)))
    return s, d


levels_st = st.lists(st.floats(0.0, 3.0), min_size=1, max_size=4, unique=True)
degs_st = st.lists(st.integers(1, 3), min_size=4, max_size=4)


@settings(max_examples=50, deadline=None)
@given(levels=levels_st, degs=degs_st, beta=st.floats(0.3, 2.0))
def test_coefficient_identities_property(levels, degs, beta):
    e = sorted(levels)
    w = degs[:len(e)]
    sp = make_spectrum(e, w)
    rep = expansion_coefficients(sp, beta)
    s1, d1 = _raw_sums(e, w, beta, 1)
    s2, d2 = _raw_sums(e, w, beta, 2)
    s3, d3 = _raw_sums(e, w, beta, 3)
    assert rep.S == pytest.approx((s1, s2, s3), rel=1e-12)
    assert rep.D == pytest.approx((d1, d2, d3), rel=1e-12, abs=1e-15)

    c = rep.closed_form
    assert c.alpha1 == pytest.approx(s1 + d1, rel=1e-12)
    assert c.alpha2_bose == pytest.approx(s2 / 2 - s2 * d1 / s1 + d2,
                                          rel=1e-12, abs=1e-14)
    assert c.alpha2_fermi == -c.alpha2_bose
    assert c.alpha3 == pytest.approx(
        -3 * s2 + s3 / 3 + 2 * s2 ** 2 / s1
        + (2 * s2 ** 2 - s1 * s3) * d1 / s1 ** 2 - 2 * s2 * d2 / s1 + d3,
        rel=1e-12, abs=1e-14)
    assert c.beta1 == pytest.approx(-s1, rel=1e-12)
    assert c.beta2_bose == 0.0
    assert c.beta2_fermi == pytest.approx(2 * s2, rel=1e-12)

    s = rep.series_consistent
    assert (s.alpha1, s.alpha2_bose, s.alpha2_fermi, s.beta1) == \
        (c.alpha1, c.alpha2_bose, c.alpha2_fermi, c.beta1)
    assert s.alpha3 == pytest.approx(
        -s2 ** 2 / (2 * s1) + s3 / 3
        + (2 * s2 ** 2 - s1 * s3) * d1 / s1 ** 2 - 2 * s2 * d2 / s1 + d3,
        rel=1e-12, abs=1e-14)
    assert s.beta2_bose == 0.0 and s.beta2_fermi == 0.0

    assert rep.alpha2_bose_dos_form == pytest.approx(
        s2 * (1 - d1 / s1 + d2 / s2), rel=1e-12, abs=1e-14)


def test_single_zero_level_coefficients():
    # S_k = 1, D_k = 0: the two alpha_3 conventions split to -2/3 vs -1/6
    rep = expansion_coefficients(make_spectrum([0.0], [1]), 1.0)
    assert rep.S == (1.0, 1.0, 1.0) and rep.D == (0.0, 0.0, 0.0)
    c, s = rep.closed_form, rep.series_consistent
    assert c.alpha1 == 1.0
    assert c.alpha2_bose == 0.5 and c.alpha2_fermi == -0.5
    assert c.alpha3 == pytest.approx(-2.0 / 3.0, rel=1e-14)
    assert s.alpha3 == pytest.approx(-1.0 / 6.0, rel=1e-14)
    assert c.beta1 == -1.0
    assert (c.beta2_bose, c.beta2_fermi) == (0.0, 2.0)
    assert (s.beta2_bose, s.beta2_fermi) == (0.0, 0.0)


def test_sums_from_levels_is_the_raw_formula():
    e, w = [0.0, 1.0, 4.0], [1, 6, 12]
    assert sums_from_levels(e, w, 0.7, 2) == \
        pytest.approx(_raw_sums(e, w, 0.7, 2), rel=1e-14)


# --- frozen box values at 3 T_c ---------------------------------------------------

def test_box_sums_at_three_tc_match_theta_oracle():
    # closed form: S_k = theta3(k beta)^3, D_k = 3 beta theta3' theta3^2,
    # evaluated in 30-digit arithmetic and frozen here
    beta = 1.0 / (3.0 * T_C_100)
    rep = expansion_coefficients(TrapSpec("box3d_pbc"), beta)
    assert rep.S == pytest.approx((198.93385998111148, 70.33374070012954,
                                   38.284839203675418), rel=1e-11)
    assert rep.D == pytest.approx((298.40078997166722, 52.750305525097155,
                                   19.142419601836842), rel=1e-11)
    assert rep.closed_form.alpha1 == pytest.approx(497.3346499527787, rel=1e-11)
    assert rep.closed_form.alpha2_bose == pytest.approx(-17.583435175032385,
                                                        rel=1e-10)
    assert rep.closed_form.alpha3 == pytest.approx(-149.49088449443682,
                                                   rel=1e-10)
    assert rep.series_consistent.alpha3 == pytest.approx(-0.65649363814554348,
                                                         rel=1e-8)
    # this close to the continuum the sums obey the eta = 3/2 ratios
    assert rep.D[0] / rep.S[0] == pytest.approx(1.5, rel=1e-10)
    assert rep.S[1] / rep.S[0] == pytest.approx(2.0 ** -1.5, rel=1e-10)


def test_direct_spectrum_source_agrees_with_trap_source():
    beta = 1.0 / (3.0 * T_C_100)
    rep_trap = expansion_coefficients(TrapSpec("box3d_pbc"), beta)
    sp = adaptive_spectrum(TrapSpec("box3d_pbc"), beta, 100.0, "bose")
    rep_sp = expansion_coefficients(sp, beta)
    # the stored spectrum is truncated at the occupancy tail, not the sum
    # tail, so agreement is limited by that cutoff
    assert rep_sp.S == pytest.approx(rep_trap.S, rel=1e-8)
    assert rep_sp.D == pytest.approx(rep_trap.D, rel=1e-8)


def test_dos_source_for_general_power_law():
    trap = TrapSpec("power_law", d=3, gamma=3.7)
    eta = trap.eta()
    rep = expansion_coefficients(trap, 0.9)
    assert rep.D[0] / rep.S[0] == pytest.approx(eta, rel=1e-12)
    assert rep.D[1] / rep.S[1] == pytest.approx(eta / 2.0, rel=1e-12)
    assert rep.S[1] / rep.S[0] == pytest.approx(2.0 ** -eta, rel=1e-12)


# --- series capacity ----------------------------------------------------------------

def test_series_capacity_vanishes_with_N():
    rep = expansion_coefficients(TrapSpec("box3d_pbc"), 1.0 / (3.0 * T_C_100))
    assert series_capacity(rep, 1e-12, "bose") == pytest.approx(0.0, abs=1e-9)
    assert series_capacity(rep, 1e-12, "fermi") == pytest.approx(0.0, abs=1e-9)


def _direct_capacity(beta, N, statistics):
    sp = adaptive_spectrum(TrapSpec("box3d_pbc"), beta, N, statistics)
    return capacity(solve_state(sp, beta, N, statistics))


@pytest.mark.parametrize("statistics", ["bose", "fermi"])
def test_series_accuracy_at_high_T(statistics):
    for factor, tol in ((3.0, 1e-4), (5.0, 1e-5)):
        beta = 1.0 / (factor * T_C_100)
        rep = expansion_coefficients(TrapSpec("box3d_pbc"), beta)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            c_series = series_capacity(rep, 100.0, statistics)
        c_direct = _direct_capacity(beta, 100.0, statistics)
        assert abs(c_series - c_direct) / c_direct < tol
    # regression anchor for the N=100 bose point at 3 T_c
    beta = 1.0 / (3.0 * T_C_100)
    assert _direct_capacity(beta, 100.0, "bose") == \
        pytest.approx(453.369876, rel=1e-6)


def test_series_residual_scales_as_x_fourth():
    # at fixed beta the truncation error is O(x^4), x = N/S_1: halving N
    # should shrink it by about 2^4
    beta = 1.0 / (3.0 * T_C_100)
    rep = expansion_coefficients(TrapSpec("box3d_pbc"), beta)
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        # stay above the mu-solver noise floor (~1e-8 bits)
        for n in (64.0, 32.0, 16.0):
            err = abs(series_capacity(rep, n, "bose")
                      - _direct_capacity(beta, n, "bose"))
            errs.append(err)
    for big, small in zip(errs, errs[1:]):
        assert 8.0 < big / small < 32.0


def test_high_x_warning():
    beta = 1.0 / (3.0 * T_C_100)
    with pytest.warns(UserWarning, match="high-temperature"):
        expansion_coefficients(TrapSpec("box3d_pbc"), beta, N=100.0)
    rep = expansion_coefficients(TrapSpec("box3d_pbc"), beta)
    assert rep.x is None
    with pytest.warns(UserWarning, match="high-temperature"):
        series_capacity(rep, 100.0, "bose")
    # series_capacity records the expansion variable it used
    assert rep.x == pytest.approx(100.0 / rep.S[0], rel=1e-14)
    assert rep.C_series_bose is not None


def test_fugacity_series_against_exact():
    beta = 1.0 / (3.0 * T_C_100)
    rep = expansion_coefficients(TrapSpec("box3d_pbc"), beta)
    sp = adaptive_spectrum(TrapSpec("box3d_pbc"), beta, 20.0, "bose")
    errs = {}
    for statistics in ("bose", "fermi"):
        errs[statistics] = []
        for n in (20.0, 10.0, 5.0):
            z_exact = math.exp(beta * solve_state(sp, beta, n, statistics).mu)
            z_series = fugacity_series(rep, n, statistics)
            x = n / rep.S[0]
            err = abs(z_series - z_exact)
            assert err < 2.0 * x ** 4
            errs[statistics].append(err)
        # O(x^4) residual: halving N shrinks it by roughly 2^4
        for big, small in zip(errs[statistics], errs[statistics][1:]):
            assert 4.0 < big / small < 64.0


# --- signs, systematicity, theorem ---------------------------------------------------

@pytest.mark.parametrize("gamma,d", [(2.0, 2), (2.0, 3), (math.inf, 3)])
def test_alpha2_bose_sign_table(gamma, d):
    trap = TrapSpec("power_law", d=d, gamma=gamma) if gamma != 2.0 else \
        TrapSpec("harmonic_iso", d=d, omega=OMEGA_MATCHED)
    rep = expansion_coefficients(trap, 1.7)
    assert rep.closed_form.alpha2_bose < 0.0
    assert rep.closed_form.alpha2_fermi > 0.0


def test_alpha2_discrete_harmonic_and_dos_form_sign():
    trap = TrapSpec("harmonic_iso", omega=OMEGA_MATCHED)
    rep = expansion_coefficients(trap, 0.05 / OMEGA_MATCHED)  # beta*omega=0.05
    assert rep.closed_form.alpha2_bose < 0.0
    # for eta = 3 the alternative DOS form carries the same sign
    assert rep.alpha2_bose_dos_form < 0.0


def test_systematic_truth_table():
    assert systematic(2.0, 3) is True
    assert systematic(math.inf, 3) is True
    assert systematic(math.inf, 1) is False
    assert systematicity is systematic


def test_theorem_check_harmonic_rows():
    trap = TrapSpec("harmonic_iso", omega=OMEGA_MATCHED)
    t_lo = critical_temperatures(TrapSpec("box3d_pbc"), 100.0)[0]
    betas = [1.0 / t for t in (2.0 * t_lo, 4.0 * t_lo, 8.0 * t_lo)]
    rows = theorem_check(trap, betas, 100.0)
    assert len(rows) == 3
    for row in rows:
        assert row.verdict == "fermi >= bose"
        assert row.sign_ok
        assert row.series_margin_bits > 0.0
        assert row.direct_margin_bits > 0.0
    # without the direct cross-check the margin column is left empty
    rows2 = theorem_check(trap, betas[:1], 100.0, direct=False)
    assert rows2[0].direct_margin_bits is None
    assert rows2[0].verdict == "fermi >= bose"


def test_theorem_check_out_of_scope():
    trap = TrapSpec("power_law", d=1, gamma=math.inf)
    rows = theorem_check(trap, [1.0], 5.0, direct=False)
    assert rows[0].verdict == "out of theorem scope"
