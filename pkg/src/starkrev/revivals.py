"""Fractional-revival machinery: odd/even split, phase periods, decomposition.

Shifting n -> n - nbar splits the packet into separate sums over odd and even
shifted n.  Remapping k (k -> 2k for the odd-n sum, k -> 2k+1 for the even-n
sum, valid for even nbar) makes the shifted k run over consecutive integers.
In shifted coordinates the second-order evolution reads

    Psi_odd(t)  = sum c exp(-2 pi i [ n t/T_cl^n + k t/T_cl^k
                                      - n^2 t/t_rev^n + n k t/t_rev^nk ])
    Psi_even(t) = exp(-i pi t/T_cl^k) * sum c exp(-2 pi i [ ... same ...
                                      + n t/(2 t_rev^nk) ])

At a time that is simultaneously p1/q1 of t_rev^n and p12/q12 of t_rev^nk
(both fractions reduced), the quadratic phase of each part becomes a function
theta(n, k) that is periodic on the integer lattice.  Expanding
exp(2 pi i theta) in a discrete Fourier basis writes the packet as a finite
sum of copies of the doubly periodic classical waves

    psi_cl(t1, t2) = sum c exp(-2 pi i (n t1/T_cl^n + k t2/T_cl^k))

with arguments shifted by fractions s1/l1 of T_cl^n and s2/l2 of T_cl^k.
Restricted to one n-parity class, shifting t1 by half a Kepler period flips
the sign of the odd-n wave and preserves the even-n wave; the returned
coefficient grids fold this degeneracy out, so each physically distinct
subsidiary wave appears exactly once.

All phase bookkeeping is exact integer-rational; floats appear only inside
complex exponentials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import TimeScales, rationalize, revival_ratio
from .errors import ConfigurationError, DomainError, PeriodSearchError
from .packet import WavePacket

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# odd/even split


@dataclass(frozen=True)
class SplitPacket:
    """Packet partitioned by the parity of the shifted principal number.

    Levels are stored in shifted coordinates: n is the offset from nbar and
    k is the remapped integer index (original k = 2k for the odd part,
    2k + 1 for the even part).  odd_index/even_index point back into the
    original level order, which together with nbar records the shift.
    """

    nbar: int
    kbar: int
    field_au: float
    levels: tuple  # original StarkLevel order
    odd_index: np.ndarray
    odd_n: np.ndarray
    odd_k: np.ndarray
    odd_coeffs: np.ndarray
    even_index: np.ndarray
    even_n: np.ndarray
    even_k: np.ndarray
    even_coeffs: np.ndarray

    def recombine(self) -> np.ndarray:
        """Coefficient vector over the original levels (inverse of the split)."""
        out = np.zeros(len(self.levels), dtype=np.complex128)
        out[self.odd_index] = self.odd_coeffs
        out[self.even_index] = self.even_coeffs
        return out


def split_odd_even(wp: WavePacket) -> SplitPacket:
    """Partition a packet into odd and even shifted-n parts.

    Requires an even nbar, for which odd shifted n carries even original k
    (clean remap k -> 2k) and even shifted n carries odd original k
    (k -> 2k + 1).  An odd center would swap the roles of the two parts and
    is not supported.
    """
    if wp.nbar % 2 != 0:
        raise DomainError(
            f"odd/even splitting is implemented for even nbar only, got {wp.nbar}"
        )
    odd_ix, odd_n, odd_k, odd_c = [], [], [], []
    even_ix, even_n, even_k, even_c = [], [], [], []
    for i, (lv, c) in enumerate(zip(wp.levels, wp.coeffs)):
        ns = lv.n - wp.nbar
        if ns % 2 != 0:
            # odd shifted n <=> odd original n <=> even k
            odd_ix.append(i)
            odd_n.append(ns)
            odd_k.append(lv.k // 2)
            odd_c.append(c)
        else:
            even_ix.append(i)
            even_n.append(ns)
            even_k.append((lv.k - 1) // 2)
            even_c.append(c)
    return SplitPacket(
        nbar=wp.nbar,
        kbar=wp.kbar,
        field_au=wp.field_au,
        levels=wp.levels,
        odd_index=np.array(odd_ix, dtype=np.intp),
        odd_n=np.array(odd_n, dtype=np.int64),
        odd_k=np.array(odd_k, dtype=np.int64),
        odd_coeffs=np.array(odd_c, dtype=np.complex128),
        even_index=np.array(even_ix, dtype=np.intp),
        even_n=np.array(even_n, dtype=np.int64),
        even_k=np.array(even_k, dtype=np.int64),
        even_coeffs=np.array(even_c, dtype=np.complex128),
    )


def evolve_split(sp: SplitPacket, ts: TimeScales, t_au: float) -> np.ndarray:
    """Second-order evolution evaluated through the odd/even split.

    Returns the coefficient vector over the original levels, without the
    constant central-energy phase (multiply by exp(-i E(nbar,0) t) to compare
    with the unsplit second-order model).
    """
    out = np.zeros(len(sp.levels), dtype=np.complex128)
    x1 = t_au / ts.t_cl_n
    x2 = t_au / ts.t_cl_k
    r1 = t_au / ts.t_rev_n
    r12 = t_au / ts.t_rev_nk
    cyc_odd = sp.odd_n * x1 + sp.odd_k * x2 - sp.odd_n**2 * r1 + sp.odd_n * sp.odd_k * r12
    out[sp.odd_index] = sp.odd_coeffs * np.exp(-1j * TWO_PI * cyc_odd)
    cyc_even = (
        sp.even_n * x1
        + sp.even_k * x2
        - sp.even_n**2 * r1
        + sp.even_n * sp.even_k * r12
        + sp.even_n * r12 / 2.0
    )
    out[sp.even_index] = (
        np.exp(-1j * math.pi * x2)
        * sp.even_coeffs
        * np.exp(-1j * TWO_PI * cyc_even)
    )
    return out


def classical_wave(
    sp: SplitPacket, ts: TimeScales, part: str, t1_au: float, t2_au: float
) -> np.ndarray:
    """Doubly periodic classical-wave coefficient vector psi_cl(t1, t2).

    The vector spans the original level order, zero outside the chosen part.
    """
    if part not in ("odd", "even"):
        raise DomainError(f"part must be 'odd' or 'even', got {part!r}")
    out = np.zeros(len(sp.levels), dtype=np.complex128)
    if part == "odd":
        ix, nn, kk, cc = sp.odd_index, sp.odd_n, sp.odd_k, sp.odd_coeffs
    else:
        ix, nn, kk, cc = sp.even_index, sp.even_n, sp.even_k, sp.even_coeffs
    cyc = nn * (t1_au / ts.t_cl_n) + kk * (t2_au / ts.t_cl_k)
    out[ix] = cc * np.exp(-1j * TWO_PI * cyc)
    return out


# ---------------------------------------------------------------------------
# fractional times and quadratic phases


@dataclass(frozen=True)
class FractionalTime:
    """A time that is simultaneously a reduced fraction of both revival scales.

    t = (p1/q1) t_rev^n = (p12/q12) t_rev^nk.  nbar is carried along because
    the ratios t_rev^nk/T_cl^k = nbar and t_rev^n/T_cl^n = 2 nbar / 3 enter
    the phase bookkeeping.
    """

    p1: int
    q1: int
    p12: int
    q12: int
    t_au: float
    nbar: int


def fractional_time(p1: int, q1: int, ts: TimeScales, rs: Fraction) -> FractionalTime:
    """Build the fractional time (p1/q1) t_rev^n for a packet with exact ratio rs.

    rs must be the exact value of t_rev^n/t_rev^nk for ts; p1/q1 must be
    reduced and positive.
    """
    if q1 < 1 or p1 < 1:
        raise DomainError(f"fraction must be positive, got {p1}/{q1}")
    if math.gcd(p1, q1) != 1:
        raise DomainError(f"fraction {p1}/{q1} is not reduced")
    rs = Fraction(rs)
    measured = revival_ratio(ts)
    if abs(float(rs) - measured) > 1e-9 * measured:
        raise DomainError(
            f"rs = {rs} does not match the revival ratio {measured!r} of the "
            f"supplied time scales"
        )
    f12 = Fraction(p1, q1) * rs
    return FractionalTime(
        p1=p1,
        q1=q1,
        p12=f12.numerator,
        q12=f12.denominator,
        t_au=(p1 / q1) * ts.t_rev_n,
        nbar=ts.nbar,
    )


def _alpha_beta(ft: FractionalTime, rs: Fraction) -> tuple[Fraction, Fraction]:
    alpha = Fraction(ft.p1, ft.q1)
    beta = rs * alpha
    if beta != Fraction(ft.p12, ft.q12):
        raise DomainError(
            f"rs = {rs} is inconsistent with the fractional time "
            f"({ft.p1}/{ft.q1}, {ft.p12}/{ft.q12})"
        )
    return alpha, beta


def _theta(part: str, n: int, k: int, alpha: Fraction, beta: Fraction) -> Fraction:
    th = alpha * n * n - beta * n * k
    if part == "even":
        th -= beta * n / 2
    return th


def theta_odd(n: int, k: int, ft: FractionalTime, rs: Fraction) -> Fraction:
    """Quadratic phase (in cycles, mod 1) of the odd part at the fractional time."""
    alpha, beta = _alpha_beta(ft, Fraction(rs))
    return _theta("odd", n, k, alpha, beta) % 1


def theta_even(n: int, k: int, ft: FractionalTime, rs: Fraction) -> Fraction:
    """Quadratic phase (in cycles, mod 1) of the even part at the fractional time."""
    alpha, beta = _alpha_beta(ft, Fraction(rs))
    return _theta("even", n, k, alpha, beta) % 1


# ---------------------------------------------------------------------------
# minimal periods

# The grids index theta on residues, so the defining property of the periods
# is theta(n, k) == theta(n mod l1, k mod l2) (mod 1) for every n of the
# part's parity and every integer k.  theta is quadratic in n and bilinear in
# (n, k); integrality of the difference at the generator set below (offsets
# a in [-2, 2] periods in n, first two parity-class members each, and a small
# spread of k around 0, l2 and 2*l2) implies it everywhere.


def _k_period(part: str, beta: Fraction) -> int:
    # theta(n, k + l2) - theta(n, k) = -beta l2 n must be an integer for all
    # n in the parity class: beta*l2 integral (odd part, n=1 reachable) or
    # 2*beta*l2 integral (even part).
    if part == "odd":
        return beta.denominator
    return (2 * beta).denominator


def _n_period_ok(
    part: str, l1: int, l2: int, alpha: Fraction, beta: Fraction
) -> bool:
    parity = 1 if part == "odd" else 0
    test_ns: list[int] = []
    for a in (-2, -1, 0, 1, 2):
        base = a * l1
        picked = [base + j for j in range(6) if (base + j) % 2 == parity][:2]
        test_ns.extend(picked)
    test_ks = (0, 1, 2, -1, l2, l2 + 1, -l2, 2 * l2 + 1)
    for n in test_ns:
        n0 = n % l1
        for k in test_ks:
            k0 = k % l2
            d = _theta(part, n, k, alpha, beta) - _theta(part, n0, k0, alpha, beta)
            if d.denominator != 1:
                return False
    return True


def minimal_periods(ft: FractionalTime, rs: Fraction) -> tuple[int, int, int, int]:
    """Smallest (l1, l2) for the odd part and (l1', l2') for the even part.

    Searched in exact rational arithmetic; raises PeriodSearchError if no
    n-period exists below 4 * q1 * q12 * s (inconsistent inputs).
    """
    rs = Fraction(rs)
    alpha, beta = _alpha_beta(ft, rs)
    l_max = 4 * ft.q1 * ft.q12 * rs.denominator
    out: list[int] = []
    for part in ("odd", "even"):
        l2 = _k_period(part, beta)
        l1 = None
        for cand in range(1, l_max + 1):
            if _n_period_ok(part, cand, l2, alpha, beta):
                l1 = cand
                break
        if l1 is None:
            raise PeriodSearchError(
                f"no {part}-part n-period found below {l_max} for "
                f"p1/q1 = {ft.p1}/{ft.q1}, rs = {rs}"
            )
        out.extend((l1, l2))
    return out[0], out[1], out[2], out[3]


# ---------------------------------------------------------------------------
# expansion coefficients


@dataclass(frozen=True)
class RevivalDecomposition:
    """Subsidiary-wave coefficients of a packet at a fractional time.

    a_odd[s1, s2] multiplies the odd classical wave shifted by
    (s1/l1) T_cl^n and (s2/l2) T_cl^k, and likewise a_even with (l1p, l2p).
    When the raw period l1 is even, the half-period shift duplicates waves
    (up to sign) on a fixed parity class, and the grids returned here carry
    that degeneracy folded out: they have l1/2 (resp. l1p/2) rows, and each
    physically distinct wave appears once.  even_prefactor is the k-parity
    phase exp(-i pi (p12/q12) nbar) multiplying the whole even sum.
    """

    p1: int
    q1: int
    p12: int
    q12: int
    nbar: int
    l1: int
    l2: int
    l1p: int
    l2p: int
    a_odd: np.ndarray
    a_even: np.ndarray
    even_prefactor: complex


def _phase_grid(part: str, l1: int, l2: int, alpha: Fraction, beta: Fraction) -> np.ndarray:
    x = np.empty((l1, l2), dtype=np.complex128)
    for k1 in range(l1):
        for k2 in range(l2):
            th = _theta(part, k1, k2, alpha, beta) % 1
            x[k1, k2] = np.exp(2j * math.pi * float(th))
    return x


def _dft_coefficients(x: np.ndarray) -> np.ndarray:
    l1, l2 = x.shape
    # a[s1, s2] = (1/(l1 l2)) sum_k x[k1, k2] e^{+2 pi i (s1 k1/l1 + s2 k2/l2)}
    return np.conj(np.fft.fft2(np.conj(x))) / (l1 * l2)


def _fold(a: np.ndarray, parity_sign: float) -> np.ndarray:
    l1 = a.shape[0]
    if l1 % 2 == 1:
        return a
    half = l1 // 2
    return a[:half] + parity_sign * a[half:]


def expansion_coefficients(
    ft: FractionalTime, rs: Fraction, periods: tuple[int, int, int, int]
) -> RevivalDecomposition:
    """Subsidiary-wave coefficient grids at the fractional time.

    The raw coefficients are the 2-D DFT of exp(2 pi i theta) over one period
    cell; folding (see RevivalDecomposition) is norm-preserving, so both
    grids satisfy sum |a|^2 = 1.
    """
    rs = Fraction(rs)
    alpha, beta = _alpha_beta(ft, rs)
    l1, l2, l1p, l2p = periods
    a_odd = _fold(_dft_coefficients(_phase_grid("odd", l1, l2, alpha, beta)), -1.0)
    a_even = _fold(_dft_coefficients(_phase_grid("even", l1p, l2p, alpha, beta)), 1.0)
    a_odd.flags.writeable = False
    a_even.flags.writeable = False
    pref_cycles = Fraction(ft.p12 * ft.nbar, ft.q12) % 2
    even_prefactor = complex(np.exp(-1j * math.pi * float(pref_cycles)))
    return RevivalDecomposition(
        p1=ft.p1,
        q1=ft.q1,
        p12=ft.p12,
        q12=ft.q12,
        nbar=ft.nbar,
        l1=l1,
        l2=l2,
        l1p=l1p,
        l2p=l2p,
        a_odd=a_odd,
        a_even=a_even,
        even_prefactor=even_prefactor,
    )


# ---------------------------------------------------------------------------
# reconstruction and its direct oracle


def _time_fractions(ft: FractionalTime) -> tuple[Fraction, Fraction]:
    # t/T_cl^n = (p1/q1)(2 nbar/3); t/T_cl^k = (p12/q12) nbar -- exact.
    x1 = Fraction(ft.p1, ft.q1) * Fraction(2 * ft.nbar, 3)
    x2 = Fraction(ft.p12, ft.q12) * ft.nbar
    return x1, x2


def _exp_cycles(cycles: Fraction) -> complex:
    return complex(np.exp(-2j * math.pi * float(cycles % 1)))


def direct_fraction_coefficients(
    sp: SplitPacket, ft: FractionalTime, rs: Fraction
) -> np.ndarray:
    """Second-order coefficients at the fractional time, summed directly.

    Exact-rational phase reduction; this is the reference the decomposition
    must reproduce.
    """
    rs = Fraction(rs)
    alpha, beta = _alpha_beta(ft, rs)
    if sp.nbar != ft.nbar:
        raise ConfigurationError("split packet and fractional time disagree on nbar")
    x1, x2 = _time_fractions(ft)
    f12 = Fraction(ft.p12, ft.q12)
    out = np.zeros(len(sp.levels), dtype=np.complex128)
    for ix, n, k, c in zip(sp.odd_index, sp.odd_n, sp.odd_k, sp.odd_coeffs):
        cyc = n * x1 + k * x2 - alpha * n * n + f12 * n * k
        out[ix] = c * _exp_cycles(cyc)
    pref = complex(np.exp(-1j * math.pi * float(x2 % 2)))
    for ix, n, k, c in zip(sp.even_index, sp.even_n, sp.even_k, sp.even_coeffs):
        cyc = n * x1 + k * x2 - alpha * n * n + f12 * n * k + f12 * n / 2
        out[ix] = pref * c * _exp_cycles(cyc)
    return out


def _shift_phases(nn: np.ndarray, count: int, modulus: int) -> np.ndarray:
    # E[j, s] = exp(-2 pi i n_j s / modulus), reduced exactly in integers.
    s = np.arange(count, dtype=np.int64)
    frac = np.mod(np.outer(nn, s), modulus) / modulus
    return np.exp(-2j * math.pi * frac)


def reconstruct_at_fraction(
    sp: SplitPacket, dec: RevivalDecomposition, ft: FractionalTime
) -> np.ndarray:
    """Assemble the subsidiary-wave sum into a coefficient vector.

    Sums a[s1, s2] * psi_cl(t + (s1/l1) T_cl^n, t + (s2/l2) T_cl^k) over both
    parts at t = ft, entirely in shifted coordinates, and returns the vector
    over the original levels.
    """
    if (dec.p1, dec.q1, dec.p12, dec.q12) != (ft.p1, ft.q1, ft.p12, ft.q12):
        raise ConfigurationError("decomposition and fractional time disagree")
    if sp.nbar != ft.nbar or dec.nbar != ft.nbar:
        raise ConfigurationError("split packet and fractional time disagree on nbar")
    x1, x2 = _time_fractions(ft)
    out = np.zeros(len(sp.levels), dtype=np.complex128)

    for part, grid, l1, l2, pref in (
        ("odd", dec.a_odd, dec.l1, dec.l2, 1.0 + 0.0j),
        ("even", dec.a_even, dec.l1p, dec.l2p, dec.even_prefactor),
    ):
        if part == "odd":
            ix, nn, kk, cc = sp.odd_index, sp.odd_n, sp.odd_k, sp.odd_coeffs
        else:
            ix, nn, kk, cc = sp.even_index, sp.even_n, sp.even_k, sp.even_coeffs
        if len(ix) == 0:
            continue
        base = np.array(
            [_exp_cycles(n * x1 + k * x2) for n, k in zip(nn, kk)],
            dtype=np.complex128,
        )
        e1 = _shift_phases(nn, grid.shape[0], l1)
        e2 = _shift_phases(kk, grid.shape[1], l2)
        wave_sum = np.sum((e1 @ grid) * e2, axis=1)
        out[ix] = pref * cc * base * wave_sum
    return out


def max_reconstruction_error(
    sp: SplitPacket, dec: RevivalDecomposition, ft: FractionalTime, rs: Fraction
) -> float:
    """Largest per-coefficient relative error of the subsidiary-wave sum."""
    direct = direct_fraction_coefficients(sp, ft, rs)
    recon = reconstruct_at_fraction(sp, dec, ft)
    mags = np.abs(direct)
    mask = mags > 0
    if not np.any(mask):
        return 0.0
    return float(np.max(np.abs(recon[mask] - direct[mask]) / mags[mask]))


# ---------------------------------------------------------------------------
# half-revival autocorrelation split


def half_revival_autocorrelation(
    sp: SplitPacket, ts: TimeScales, t_au: float
) -> tuple[complex, complex]:
    """The two overlap terms that dominate A(t) near half the revival time.

    Returns (odd term, even term): the overlap of the initial odd wave with
    the odd wave shifted by half a Stark period in its second argument, and
    of the initial even wave with the even wave shifted by a quarter Kepler
    period in its first argument.  The parts live on disjoint k-parity
    sectors, so their cross terms vanish identically and the sum of the two
    terms approximates A(t) in the validity window t_rev/2 +- 2 T_cl^k.
    """
    rs = rationalize(revival_ratio(ts))
    t_rev = rs.denominator * ts.t_rev_n
    if abs(t_au - t_rev / 2.0) > 2.0 * ts.t_cl_k * (1.0 + 1e-12):
        raise DomainError(
            f"t = {t_au!r} au lies outside the half-revival window "
            f"{t_rev / 2.0:.6e} +- {2.0 * ts.t_cl_k:.6e} au"
        )
    w_odd = np.abs(sp.odd_coeffs) ** 2
    cyc_odd = sp.odd_n * (t_au / ts.t_cl_n) + sp.odd_k * (
        (t_au + ts.t_cl_k / 2.0) / ts.t_cl_k
    )
    odd_term = complex(np.sum(w_odd * np.exp(-1j * TWO_PI * cyc_odd)))
    w_even = np.abs(sp.even_coeffs) ** 2
    cyc_even = sp.even_n * ((t_au + ts.t_cl_n / 4.0) / ts.t_cl_n) + sp.even_k * (
        t_au / ts.t_cl_k
    )
    even_term = complex(np.sum(w_even * np.exp(-1j * TWO_PI * cyc_even)))
    return odd_term, even_term


# ---------------------------------------------------------------------------
# report export


def decomposition_report(dec: RevivalDecomposition, max_error: float) -> dict:
    """JSON-ready dict with stable field names."""

    def grid(a: np.ndarray) -> list:
        return [[[float(v.real), float(v.imag)] for v in row] for row in a]

    return {
        "p1": dec.p1,
        "q1": dec.q1,
        "p12": dec.p12,
        "q12": dec.q12,
        "nbar": dec.nbar,
        "l1": dec.l1,
        "l2": dec.l2,
        "l1p": dec.l1p,
        "l2p": dec.l2p,
        "a_odd": grid(dec.a_odd),
        "a_even": grid(dec.a_even),
        "even_prefactor": [
            float(dec.even_prefactor.real),
            float(dec.even_prefactor.imag),
        ],
        "max_reconstruction_error": float(max_error),
    }
