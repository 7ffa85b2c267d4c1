"""First-order Stark spectrum of hydrogen and its characteristic time scales.

A hydrogen atom in a weak static electric field F (atomic units, m = 0) has
energies

    E(n, k) = -1/(2 n^2) + (3/2) n k F,

where n is the principal quantum number and k = n1 - n2 is the difference of
the parabolic quantum numbers.  Within a manifold of fixed n, k runs from
-(n-1) to n-1 in steps of two, so k is even when n is odd and odd when n is
even.

A superposition centered on (nbar, kbar=0) evolves on four time scales, all
derived from the derivatives of E at the center:

    T_cl^n    = 2 pi nbar^3          Kepler (radial) period
    T_cl^k    = 2 pi / (3 F nbar)    Stark (eccentricity) period
    t_rev^n   = (4 pi / 3) nbar^4    n-revival time
    t_rev^nk  = 2 pi / (3 F)         cross-revival time (mixed n,k derivative)

There is no pure k-revival time because E is linear in k.  The definitions of
T_cl^k and t_rev^nk carry a factor of two that compensates the two-unit jump
between adjacent k values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AboveThresholdError, DomainError
from .units import field_to_volts_per_cm

# Commensurability bounds implied by keeping the field below the classical
# ionization threshold F_c = 1/(16 nbar^4):
#   T_cl^n/T_cl^k  = 3 F nbar^4 < 3/16
#   t_rev^n/t_rev^nk = 2 F nbar^4 < 1/8
CLASSICAL_RATIO_LIMIT = Fraction(3, 16)
REVIVAL_RATIO_LIMIT = Fraction(1, 8)

DEFAULT_MAX_DENOMINATOR = 64


@dataclass(frozen=True, order=True)
class StarkLevel:
    """A Stark level labelled by (n, k) with k = n1 - n2.

    Valid levels satisfy |k| <= n - 1 and k == n - 1 (mod 2).
    """

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"principal quantum number must be >= 1, got {self.n}")
        if abs(self.k) > self.n - 1:
            raise DomainError(f"|k| must be <= n - 1, got (n={self.n}, k={self.k})")
        if (self.k - (self.n - 1)) % 2 != 0:
            raise DomainError(
                f"k must have the parity of n - 1, got (n={self.n}, k={self.k})"
            )


def energy_at(n: float, k: float, field_au: float) -> float:
    """First-order Stark energy function, with no level validation.

    Useful for reference values such as the expansion center (nbar, 0),
    which need not be a parity-valid level.
    """
    return -1.0 / (2.0 * n * n) + 1.5 * n * k * field_au


def energy(level: StarkLevel, field_au: float) -> float:
    """Energy of a valid Stark level, in atomic units."""
    if not math.isfinite(field_au) or field_au <= 0.0:
        raise DomainError(f"field must be positive and finite, got {field_au!r}")
    return energy_at(level.n, level.k, field_au)


def enumerate_manifold(n: int) -> list[StarkLevel]:
    """All n levels of the Stark manifold with principal quantum number n.

    Returns levels ordered by increasing k: k = -(n-1), -(n-1)+2, ..., n-1.
    """
    if n < 1:
        raise DomainError(f"principal quantum number must be >= 1, got {n}")
    return [StarkLevel(n, k) for k in range(-(n - 1), n, 2)]


@dataclass(frozen=True)
class TimeScales:
    """The four characteristic times of a Stark packet centered at (nbar, 0)."""

    nbar: int
    field_au: float
    t_cl_n: float    # 2 pi nbar^3
    t_cl_k: float    # 2 pi / (3 F nbar)
    t_rev_n: float   # (4 pi / 3) nbar^4
    t_rev_nk: float  # 2 pi / (3 F)


def time_scales(nbar: int, field_au: float) -> TimeScales:
    """Evaluate the four closed-form time scales at (nbar, kbar=0), in au."""
    if nbar < 2:
        raise DomainError(f"nbar must be >= 2 for Stark splitting, got {nbar}")
    if not math.isfinite(field_au) or field_au <= 0.0:
        raise DomainError(f"field must be positive and finite, got {field_au!r}")
    return TimeScales(
        nbar=nbar,
        field_au=field_au,
        t_cl_n=2.0 * math.pi * nbar**3,
        t_cl_k=2.0 * math.pi / (3.0 * field_au * nbar),
        t_rev_n=(4.0 * math.pi / 3.0) * nbar**4,
        t_rev_nk=2.0 * math.pi / (3.0 * field_au),
    )


def classical_ratio(ts: TimeScales) -> float:
    """T_cl^n / T_cl^k = 3 F nbar^4."""
    return ts.t_cl_n / ts.t_cl_k


def revival_ratio(ts: TimeScales) -> float:
    """t_rev^n / t_rev^nk = 2 F nbar^4."""
    return ts.t_rev_n / ts.t_rev_nk


def ionization_threshold(nbar: int) -> float:
    """Classical field-ionization threshold F_c = 1/(16 nbar^4), in au."""
    if nbar < 2:
        raise DomainError(f"nbar must be >= 2, got {nbar}")
    return 1.0 / (16.0 * nbar**4)


def _check_ratio(target: Fraction, limit: Fraction, nbar: int, what: str) -> None:
    if target <= 0:
        raise DomainError(f"{what} ratio must be positive, got {target}")
    if target >= limit:
        f_c = ionization_threshold(nbar)
        raise AboveThresholdError(
            f"{what} ratio {target} >= {limit} requires a field at or above the "
            f"ionization threshold F_c = {f_c:.6e} au "
            f"({field_to_volts_per_cm(f_c):.1f} V/cm) for nbar = {nbar}",
            f_c_au=f_c,
        )


def solve_field_for_classical_ratio(nbar: int, target: Fraction) -> float:
    """Field strength (au) that sets T_cl^n/T_cl^k to an exact rational a/b.

    Requires a/b < 3/16 so the field stays below the ionization threshold.
    """
    if nbar < 2:
        raise DomainError(f"nbar must be >= 2, got {nbar}")
    target = Fraction(target)
    _check_ratio(target, CLASSICAL_RATIO_LIMIT, nbar, "classical")
    return float(target) / (3.0 * nbar**4)


def solve_field_for_revival_ratio(nbar: int, target: Fraction) -> float:
    """Field strength (au) that sets t_rev^n/t_rev^nk to an exact rational r/s.

    Requires r/s < 1/8 so the field stays below the ionization threshold.
    """
    if nbar < 2:
        raise DomainError(f"nbar must be >= 2, got {nbar}")
    target = Fraction(target)
    _check_ratio(target, REVIVAL_RATIO_LIMIT, nbar, "revival")
    return float(target) / (2.0 * nbar**4)


def rationalize(x: float, max_den: int = DEFAULT_MAX_DENOMINATOR) -> Fraction:
    """Best rational approximation to x with denominator <= max_den.

    Continued-fraction based (via Fraction.limit_denominator); the result
    minimizes |x - num/den| over all fractions with den <= max_den.
    """
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"x must be positive and finite, got {x!r}")
    if max_den < 1:
        raise DomainError(f"max_den must be >= 1, got {max_den}")
    best = Fraction(x).limit_denominator(max_den)
    if best == 0:
        # x below 1/(2 max_den): the closest admissible positive fraction
        best = Fraction(1, max_den)
    return best
