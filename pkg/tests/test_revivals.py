import math
import random
from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from starkrev import core, dynamics, packet, revivals
from starkrev.core import energy_at
from starkrev.errors import DomainError

RS = Fraction(1, 12)
FIELD = core.solve_field_for_revival_ratio(24, RS)
TS = core.time_scales(24, FIELD)
WP = packet.build_packet(packet.PacketSpec(nbar=24, field_au=FIELD))
SP = revivals.split_odd_even(WP)


def _setup(rs: Fraction):
    f = core.solve_field_for_revival_ratio(24, rs)
    ts = core.time_scales(24, f)
    wp = packet.build_packet(packet.PacketSpec(nbar=24, field_au=f))
    return ts, wp, revivals.split_odd_even(wp)


def _brute_direct(sp, ts, ft):
    """Independent oracle: float evaluation of the split second-order sum."""
    t = ft.t_au
    out = np.zeros(len(sp.levels), dtype=np.complex128)
    for ix, n, k, c in zip(sp.odd_index, sp.odd_n, sp.odd_k, sp.odd_coeffs):
        cyc = (
            n * t / ts.t_cl_n
            + k * t / ts.t_cl_k
            - n * n * t / ts.t_rev_n
            + n * k * t / ts.t_rev_nk
        )
        out[ix] = c * np.exp(-2j * math.pi * cyc)
    pref = np.exp(-1j * math.pi * t / ts.t_cl_k)
    for ix, n, k, c in zip(sp.even_index, sp.even_n, sp.even_k, sp.even_coeffs):
        cyc = (
            n * t / ts.t_cl_n
            + k * t / ts.t_cl_k
            - n * n * t / ts.t_rev_n
            + n * k * t / ts.t_rev_nk
            + n * t / (2.0 * ts.t_rev_nk)
        )
        out[ix] = pref * c * np.exp(-2j * math.pi * cyc)
    return out


# --- splitting


def test_split_partitions_by_parity():
    assert len(SP.odd_index) + len(SP.even_index) == len(WP.levels)
    odd_ns = {WP.levels[i].n for i in SP.odd_index}
    even_ns = {WP.levels[i].n for i in SP.even_index}
    assert odd_ns == {23, 25}
    assert even_ns == {24}
    # shifted k is consecutive-integer valued: original k = 2k (odd part),
    # 2k + 1 (even part)
    for i, k in zip(SP.odd_index, SP.odd_k):
        assert WP.levels[i].k == 2 * k
    for i, k in zip(SP.even_index, SP.even_k):
        assert WP.levels[i].k == 2 * k + 1


def test_split_recombines_exactly():
    assert np.array_equal(SP.recombine(), np.asarray(WP.coeffs))
    norm = np.sum(np.abs(SP.odd_coeffs) ** 2) + np.sum(np.abs(SP.even_coeffs) ** 2)
    assert norm == pytest.approx(1.0, abs=1e-12)


def test_split_single_manifold_leaves_one_part_empty():
    wp = packet.build_packet(
        packet.PacketSpec(nbar=24, field_au=FIELD, n_list=(24,), truncation="full")
    )
    sp = revivals.split_odd_even(wp)
    assert len(sp.odd_index) == 0
    assert len(sp.even_index) == 24


def test_split_requires_even_center():
    wp = packet.build_packet(packet.PacketSpec(nbar=23, field_au=FIELD))
    with pytest.raises(DomainError):
        revivals.split_odd_even(wp)


def test_split_evolution_matches_unsplit_taylor2():
    model = dynamics.taylor2_model(TS)
    rng = np.random.default_rng(11)
    for t in rng.uniform(0.0, 5.0 * TS.t_cl_k, size=20):
        via_split = revivals.evolve_split(SP, TS, t) * np.exp(
            -1j * energy_at(24, 0, FIELD) * t
        )
        direct = dynamics.evolved_coefficients(WP, model, t)
        assert np.max(np.abs(via_split - direct)) < 1e-12


def test_parity_sectors_orthogonal():
    t = 0.4 * TS.t_cl_k
    odd = revivals.classical_wave(SP, TS, "odd", t, t)
    even = revivals.classical_wave(SP, TS, "even", t, t)
    assert np.vdot(odd, even) == 0.0


def test_classical_wave_periodicity_identities():
    # odd part flips sign under a half-Kepler shift of the first argument;
    # the even part is periodic under the same shift
    for t1, t2 in ((0.0, 0.0), (0.37 * TS.t_cl_k, 0.81 * TS.t_cl_k)):
        odd_shift = revivals.classical_wave(SP, TS, "odd", t1 + TS.t_cl_n / 2, t2)
        odd_base = revivals.classical_wave(SP, TS, "odd", t1, t2)
        assert np.max(np.abs(odd_shift + odd_base)) < 1e-12
        even_shift = revivals.classical_wave(SP, TS, "even", t1 + TS.t_cl_n / 2, t2)
        even_base = revivals.classical_wave(SP, TS, "even", t1, t2)
        assert np.max(np.abs(even_shift - even_base)) < 1e-12


# --- fractional times


def test_fractional_time_examples():
    ft = revivals.fractional_time(6, 1, TS, RS)
    assert (ft.p12, ft.q12) == (1, 2)
    assert ft.t_au == pytest.approx(6 * TS.t_rev_n, rel=1e-15)

    ft_full = revivals.fractional_time(12, 1, TS, RS)
    assert (ft_full.p12, ft_full.q12) == (1, 1)

    ft_half = revivals.fractional_time(1, 2, TS, RS)
    assert (ft_half.p12, ft_half.q12) == (1, 24)


def test_fractional_time_rejects_unreduced():
    with pytest.raises(DomainError):
        revivals.fractional_time(6, 2, TS, RS)


def test_fractional_time_rejects_inconsistent_ratio():
    with pytest.raises(DomainError):
        revivals.fractional_time(1, 2, TS, Fraction(1, 16))


# --- theta phases


def test_theta_vanishes_at_full_revival():
    ft = revivals.fractional_time(12, 1, TS, RS)
    for n in range(-6, 7):
        for k in range(-8, 9):
            assert revivals.theta_odd(n, k, ft, RS) == 0
            if n % 2 == 0:
                assert revivals.theta_even(n, k, ft, RS) == 0


def test_theta_even_half_revival_value():
    ft = revivals.fractional_time(6, 1, TS, RS)
    assert revivals.theta_even(2, 0, ft, RS) == Fraction(1, 2)


def test_theta_matches_float_phase_evaluation():
    # oracle: evaluate the quadratic part of the split phase directly at t
    ft = revivals.fractional_time(3, 5, TS, RS)
    t = ft.t_au
    for n, k in ((1, -3), (-1, 4), (3, 2), (2, 1), (-2, 7)):
        quad = -n * n * t / TS.t_rev_n + n * k * t / TS.t_rev_nk
        expected = np.exp(-2j * math.pi * quad)
        got = np.exp(2j * math.pi * float(revivals.theta_odd(n, k, ft, RS)))
        assert abs(got - expected) < 1e-9
        quad_even = quad + n * t / (2.0 * TS.t_rev_nk)
        expected_even = np.exp(-2j * math.pi * quad_even)
        got_even = np.exp(2j * math.pi * float(revivals.theta_even(n, k, ft, RS)))
        assert abs(got_even - expected_even) < 1e-9


def test_theta_k_period_divides_bound():
    random.seed(4)
    for _ in range(20):
        q1 = random.randint(1, 8)
        p1 = random.choice([p for p in range(1, q1 + 1) if gcd(p, q1) == 1])
        ft = revivals.fractional_time(p1, q1, TS, RS)
        period = 2 * q1 * RS.denominator
        n = random.randrange(-9, 9) * 2 + 1
        k = random.randint(-20, 20)
        assert revivals.theta_odd(n, k + period, ft, RS) == revivals.theta_odd(
            n, k, ft, RS
        )


# --- minimal periods


def _theta_fn(part, n, k, ft, rs):
    if part == "odd":
        return revivals.theta_odd(n, k, ft, rs)
    return revivals.theta_even(n, k, ft, rs)


def _residue_condition_holds(part, l1, l2, ft, rs):
    """Brute-force oracle over a full residue window in exact rationals."""
    parity = 1 if part == "odd" else 0
    for n in range(-2 * l1 - 3, 2 * l1 + 4):
        if n % 2 != parity:
            continue
        for k in range(-l2 - 1, 2 * l2 + 2):
            d = _theta_fn(part, n, k, ft, rs) - _theta_fn(
                part, n % l1, k % l2, ft, rs
            )
            if d.denominator != 1:
                return False
    return True


def test_minimal_periods_full_revival():
    ft = revivals.fractional_time(12, 1, TS, RS)
    assert revivals.minimal_periods(ft, RS) == (1, 1, 1, 1)


def test_minimal_periods_half_revival():
    ft = revivals.fractional_time(6, 1, TS, RS)
    assert revivals.minimal_periods(ft, RS) == (2, 2, 4, 1)


def test_minimal_periods_brute_force_validation():
    random.seed(9)
    cases = []
    for rs in (Fraction(1, 12), Fraction(1, 16)):
        ts, _, _ = _setup(rs)
        for _ in range(6):
            q1 = random.randint(1, 8)
            p1 = random.choice([p for p in range(1, q1 + 1) if gcd(p, q1) == 1])
            cases.append((rs, ts, p1, q1))
    for rs, ts, p1, q1 in cases:
        ft = revivals.fractional_time(p1, q1, ts, rs)
        l1, l2, l1p, l2p = revivals.minimal_periods(ft, rs)
        for part, n_per, k_per in (("odd", l1, l2), ("even", l1p, l2p)):
            assert _residue_condition_holds(part, n_per, k_per, ft, rs)
            # minimality: every smaller candidate fails
            for smaller in range(1, n_per):
                assert not _residue_condition_holds(part, smaller, k_per, ft, rs)
            for smaller in range(1, k_per):
                assert not _residue_condition_holds(part, n_per, smaller, ft, rs)


# --- expansion coefficients


def test_full_revival_identity_decomposition():
    ft = revivals.fractional_time(12, 1, TS, RS)
    dec = revivals.expansion_coefficients(ft, RS, revivals.minimal_periods(ft, RS))
    assert dec.a_odd.shape == (1, 1)
    assert dec.a_even.shape == (1, 1)
    assert abs(dec.a_odd[0, 0] - 1.0) < 1e-12
    assert abs(dec.a_even[0, 0] - 1.0) < 1e-12
    assert abs(dec.even_prefactor - 1.0) < 1e-12


def test_half_revival_single_waves_at_quoted_shifts():
    # one odd subsidiary wave shifted by half a Stark period, one even wave
    # shifted by a quarter Kepler period
    ft = revivals.fractional_time(6, 1, TS, RS)
    dec = revivals.expansion_coefficients(ft, RS, revivals.minimal_periods(ft, RS))
    assert dec.a_odd.shape == (1, 2)
    assert abs(dec.a_odd[0, 0]) < 1e-12
    assert abs(dec.a_odd[0, 1] - 1.0) < 1e-12  # shift (1/2) T_cl^k
    assert dec.a_even.shape == (2, 1)
    assert abs(dec.a_even[0, 0]) < 1e-12
    assert abs(dec.a_even[1, 0] - 1.0) < 1e-12  # shift (1/4) T_cl^n
    assert abs(dec.even_prefactor - 1.0) < 1e-12


def test_parseval_on_random_fractions():
    random.seed(13)
    for rs in (RS, Fraction(1, 16), Fraction(1, 24)):
        ts, _, _ = _setup(rs)
        for _ in range(4):
            q1 = random.randint(1, 8)
            p1 = random.choice([p for p in range(1, q1 + 1) if gcd(p, q1) == 1])
            ft = revivals.fractional_time(p1, q1, ts, rs)
            dec = revivals.expansion_coefficients(
                ft, rs, revivals.minimal_periods(ft, rs)
            )
            assert np.sum(np.abs(dec.a_odd) ** 2) == pytest.approx(1.0, abs=1e-12)
            assert np.sum(np.abs(dec.a_even) ** 2) == pytest.approx(1.0, abs=1e-12)


# --- reconstruction against the direct oracle


def _reconstruction_case(sp, ts, rs, p1, q1, tol=1e-10):
    ft = revivals.fractional_time(p1, q1, ts, rs)
    periods = revivals.minimal_periods(ft, rs)
    dec = revivals.expansion_coefficients(ft, rs, periods)
    recon = revivals.reconstruct_at_fraction(sp, dec, ft)
    brute = _brute_direct(sp, ts, ft)
    mags = np.abs(np.asarray(sp.recombine()))
    mask = mags > 0
    assert np.max(np.abs(recon[mask] - brute[mask]) / mags[mask]) < tol
    assert revivals.max_reconstruction_error(sp, dec, ft, rs) < tol


def test_reconstruction_full_and_half_revival():
    _reconstruction_case(SP, TS, RS, 12, 1)
    _reconstruction_case(SP, TS, RS, 6, 1)


def test_reconstruction_random_fractions():
    random.seed(21)
    seen = set()
    while len(seen) < 10:
        q1 = random.randint(1, 8)
        p1 = random.randint(1, q1)
        if gcd(p1, q1) != 1 or (p1, q1) in seen:
            continue
        seen.add((p1, q1))
        _reconstruction_case(SP, TS, RS, p1, q1)


def test_half_revival_closed_form():
    # the decomposition at half the revival time reduces to the two shifted
    # classical waves with no extra phases
    ft = revivals.fractional_time(6, 1, TS, RS)
    direct = revivals.direct_fraction_coefficients(SP, ft, RS)
    closed = revivals.classical_wave(
        SP, TS, "odd", ft.t_au, ft.t_au + TS.t_cl_k / 2
    ) + revivals.classical_wave(SP, TS, "even", ft.t_au + TS.t_cl_n / 4, ft.t_au)
    assert np.max(np.abs(closed - direct)) < 1e-10


def test_reconstruction_rejects_mismatched_inputs():
    ft6 = revivals.fractional_time(6, 1, TS, RS)
    ft12 = revivals.fractional_time(12, 1, TS, RS)
    dec6 = revivals.expansion_coefficients(ft6, RS, revivals.minimal_periods(ft6, RS))
    with pytest.raises(Exception):
        revivals.reconstruct_at_fraction(SP, dec6, ft12)


# --- half-revival autocorrelation split


def test_half_revival_term_dominance():
    t_half = 12.0 * TS.t_cl_k  # = t_rev / 2 exactly
    odd_i, even_i = revivals.half_revival_autocorrelation(SP, TS, t_half)
    # at whole Stark periods the even term carries the signal
    assert abs(even_i) > 5 * abs(odd_i)
    odd_h, even_h = revivals.half_revival_autocorrelation(SP, TS, t_half + TS.t_cl_k / 2)
    # at half-integer Stark periods the even term vanishes identically
    assert abs(even_h) < 1e-12
    assert abs(odd_h) > 0.1


def test_half_revival_odd_term_changes_sign_over_half_kepler():
    t0 = 12.5 * TS.t_cl_k
    odd_0, _ = revivals.half_revival_autocorrelation(SP, TS, t0)
    odd_1, _ = revivals.half_revival_autocorrelation(SP, TS, t0 + TS.t_cl_n / 2)
    assert odd_0.real * odd_1.real < 0


def test_half_revival_window_enforced():
    with pytest.raises(DomainError):
        revivals.half_revival_autocorrelation(SP, TS, 2.0 * TS.t_cl_k)


def test_half_revival_sum_approximates_autocorrelation():
    model = dynamics.taylor2_model(TS)
    for mult in (11.5, 12.0, 12.5):
        t = mult * TS.t_cl_k
        odd_term, even_term = revivals.half_revival_autocorrelation(SP, TS, t)
        a = dynamics.autocorrelation(WP, model, t)
        assert abs(abs(odd_term + even_term) - abs(a)) < 0.05


# --- report export


def test_decomposition_report_fields():
    ft = revivals.fractional_time(6, 1, TS, RS)
    dec = revivals.expansion_coefficients(ft, RS, revivals.minimal_periods(ft, RS))
    err = revivals.max_reconstruction_error(SP, dec, ft, RS)
    report = revivals.decomposition_report(dec, err)
    assert {
        "p1", "q1", "p12", "q12", "l1", "l2", "l1p", "l2p",
        "a_odd", "a_even", "even_prefactor", "max_reconstruction_error",
    } <= set(report)
    assert report["l1"] == 2 and report["l1p"] == 4
    assert report["a_odd"][0][1] == pytest.approx([1.0, 0.0], abs=1e-12)
    assert report["max_reconstruction_error"] < 1e-10
