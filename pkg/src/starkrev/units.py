"""Conversions between atomic (Hartree) units and laboratory units.

All physics in this package is computed in atomic units; picoseconds and
volts/cm appear only at interface boundaries (CLI, reports, CSV).
"""

from __future__ import annotations

import math

from .errors import DomainError

# CODATA conversion constants. Single source of truth: laboratory-unit
# comparisons in the acceptance suite depend on these exact values, so they
# must never be inlined elsewhere.
VOLTS_PER_CM_PER_AU = 5.142206747e9  # atomic unit of electric field, in V/cm
SECONDS_PER_AU = 2.418884327e-17     # atomic unit of time, in s
PS_PER_AU = SECONDS_PER_AU * 1e12    # atomic unit of time, in ps


def field_from_volts_per_cm(f_vcm: float) -> float:
    """Convert an electric-field strength from V/cm to atomic units."""
    if not math.isfinite(f_vcm) or f_vcm <= 0.0:
        raise DomainError(f"field must be positive and finite, got {f_vcm!r}")
    return f_vcm / VOLTS_PER_CM_PER_AU


def field_to_volts_per_cm(f_au: float) -> float:
    """Convert an electric-field strength from atomic units to V/cm."""
    if not math.isfinite(f_au) or f_au <= 0.0:
        raise DomainError(f"field must be positive and finite, got {f_au!r}")
    return f_au * VOLTS_PER_CM_PER_AU


def time_to_ps(t_au: float) -> float:
    """Convert a time from atomic units to picoseconds."""
    if not math.isfinite(t_au):
        raise DomainError(f"time must be finite, got {t_au!r}")
    return t_au * PS_PER_AU


def time_from_ps(t_ps: float) -> float:
    """Convert a time from picoseconds to atomic units."""
    if not math.isfinite(t_ps):
        raise DomainError(f"time must be finite, got {t_ps!r}")
    return t_ps / PS_PER_AU
