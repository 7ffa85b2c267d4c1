"""Construction of the initial coherent superposition of Stark levels.

A packet is specified by a set of manifolds (n values), a weighting across
manifolds, a Gaussian envelope in k, and a truncation rule.  Conventions:

* k envelope: amplitudes carry exp(-(k - kbar)^2 / (4 sigma_k^2)), so the
  probability distribution |c|^2 over k is a Gaussian whose continuous
  standard deviation is sigma_k.
* flat-top n weighting: each manifold carries the same marginal probability
  before truncation.  The k envelope is normalized within each full manifold
  first, so with no truncation the per-n marginals are exactly equal.
* half-manifold truncation keeps the levels nearest the central energy
  E(nbar, 0): for n < nbar only k > 0 survives (the field raises energy with
  k), for n > nbar only k < 0, and the center manifold is kept whole.
* initial phases are all zero, so the packet is phase-aligned at t = 0.

Truncation drops probability; a single global renormalization restores
sum |c|^2 = 1 afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import StarkLevel, energy_at, enumerate_manifold
from .errors import ConstructionError, DomainError

N_WEIGHTINGS = ("flat_top", "gaussian")
TRUNCATIONS = ("half_manifold", "full", "energy_window")


@dataclass(frozen=True)
class PacketSpec:
    """Recipe for a coherent Stark wave packet.

    n_list defaults to (nbar - 1, nbar, nbar + 1).  n_sigma is required for
    the gaussian n weighting; energy_window_au (a full width, centered on the
    central energy) is required for the energy_window truncation.
    """

    nbar: int
    field_au: float
    kbar: int = 0
    n_list: tuple[int, ...] | None = None
    n_weighting: str = "flat_top"
    n_sigma: float | None = None
    k_sigma: float = 6.0
    truncation: str = "half_manifold"
    energy_window_au: float | None = None

    def resolved_n_list(self) -> tuple[int, ...]:
        if self.n_list is None:
            return (self.nbar - 1, self.nbar, self.nbar + 1)
        return tuple(sorted(set(self.n_list)))


@dataclass(frozen=True)
class WavePacket:
    """Normalized coefficient vector over an ordered set of Stark levels."""

    levels: tuple[StarkLevel, ...]
    coeffs: np.ndarray  # complex128, read-only, aligned with levels
    nbar: int
    kbar: int
    field_au: float

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def _validate_spec(spec: PacketSpec) -> None:
    n_list = spec.resolved_n_list()
    if not n_list:
        raise DomainError("n_list must be non-empty")
    if any(n < 2 for n in n_list):
        raise DomainError(f"all manifolds must have n >= 2, got {n_list}")
    if spec.k_sigma <= 0:
        raise DomainError(f"k_sigma must be positive, got {spec.k_sigma}")
    if spec.field_au <= 0 or not np.isfinite(spec.field_au):
        raise DomainError(f"field must be positive and finite, got {spec.field_au}")
    if spec.n_weighting not in N_WEIGHTINGS:
        raise DomainError(f"unknown n weighting {spec.n_weighting!r}")
    if spec.n_weighting == "gaussian" and (spec.n_sigma is None or spec.n_sigma <= 0):
        raise DomainError("gaussian n weighting requires a positive n_sigma")
    if spec.truncation not in TRUNCATIONS:
        raise DomainError(f"unknown truncation {spec.truncation!r}")
    if spec.truncation == "energy_window" and (
        spec.energy_window_au is None or spec.energy_window_au <= 0
    ):
        raise DomainError("energy_window truncation requires a positive window width")


def _survives(spec: PacketSpec, level: StarkLevel) -> bool:
    if spec.truncation == "full":
        return True
    if spec.truncation == "half_manifold":
        if level.n < spec.nbar:
            return level.k > 0
        if level.n > spec.nbar:
            return level.k < 0
        return True
    # energy_window
    center = energy_at(spec.nbar, spec.kbar, spec.field_au)
    return abs(energy_at(level.n, level.k, spec.field_au) - center) <= (
        spec.energy_window_au / 2.0
    )


def build_packet(spec: PacketSpec) -> WavePacket:
    """Build the normalized packet described by spec.

    Raises ConstructionError if truncation leaves no levels.
    """
    _validate_spec(spec)

    levels: list[StarkLevel] = []
    amps: list[float] = []
    for n in spec.resolved_n_list():
        manifold = enumerate_manifold(n)
        envelope = np.array(
            [np.exp(-((lv.k - spec.kbar) ** 2) / (4.0 * spec.k_sigma**2)) for lv in manifold]
        )
        # normalize within the full manifold so manifold weights are marginals
        envelope /= np.sqrt(np.sum(envelope**2))
        if spec.n_weighting == "flat_top":
            w_n = 1.0
        else:
            w_n = np.exp(-((n - spec.nbar) ** 2) / (4.0 * spec.n_sigma**2))
        for lv, g in zip(manifold, envelope):
            if _survives(spec, lv):
                levels.append(lv)
                amps.append(w_n * g)

    if not levels:
        raise ConstructionError(
            f"truncation {spec.truncation!r} left no levels for n_list "
            f"{spec.resolved_n_list()}"
        )

    coeffs = np.asarray(amps, dtype=np.complex128)
    coeffs /= np.sqrt(np.sum(np.abs(coeffs) ** 2))
    coeffs.flags.writeable = False
    return WavePacket(
        levels=tuple(levels),
        coeffs=coeffs,
        nbar=spec.nbar,
        kbar=spec.kbar,
        field_au=spec.field_au,
    )


def coefficient_histogram(wp: WavePacket) -> list[tuple[int, int, float]]:
    """Rows (n, k, |c|^2), ordered by (n, k); weights sum to 1."""
    rows = [
        (lv.n, lv.k, float(abs(c) ** 2)) for lv, c in zip(wp.levels, wp.coeffs)
    ]
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows
