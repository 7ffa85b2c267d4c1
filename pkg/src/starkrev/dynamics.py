"""Time evolution, autocorrelation interferograms, and peak/node analysis.

Sign convention: every phase derives from exp(-i E t).  For the second-order
("taylor2") model the level frequency is

    omega(n, k) = E(nbar, 0)
        + 2 pi [ dn / T_cl^n + k / (2 T_cl^k)
                 - dn^2 / t_rev^n + dn k / (2 t_rev^nk) ],   dn = n - nbar.

The minus sign on the dn^2 term follows from d2E/dn2 = -3/nbar^4 < 0.  The
Stark part of the energy is bilinear in (n, k), so taylor2 differs from the
exact spectrum only in the Kepler terms beyond second order.  The constant
E(nbar, 0) cancels in |A| but keeps complex values comparable between models.

The autocorrelation of a normalized packet reduces to the phase sum
A(t) = sum |c_nk|^2 exp(-i omega_nk t), evaluated by the kernels module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import TimeScales, energy, energy_at
from .errors import ConfigurationError, DomainError
from .packet import WavePacket
from .units import time_to_ps

PHASE_KINDS = ("exact", "taylor2")

# Default sampling: 50 points per Kepler period resolves the finest
# interference structure (node period T_cl^n / 2) with >= 25 samples.
GRID_POINTS_PER_KEPLER_PERIOD = 50
# Hard resolution guard for user-supplied steps.
MAX_DT_FRACTION_OF_KEPLER_PERIOD = 1.0 / 20.0


@dataclass(frozen=True)
class PhaseModel:
    """Evolution phases for a packet: exact spectrum or second-order expansion."""

    kind: str
    nbar: int
    kbar: int
    time_scales: TimeScales

    def __post_init__(self):
        if self.kind not in PHASE_KINDS:
            raise DomainError(f"unknown phase model kind {self.kind!r}")
        if self.nbar != self.time_scales.nbar:
            raise ConfigurationError(
                f"model nbar {self.nbar} does not match time scales "
                f"(nbar={self.time_scales.nbar})"
            )
        if self.kind == "taylor2" and self.kbar != 0:
            raise DomainError(
                "the second-order expansion is implemented for kbar = 0 only"
            )

    def frequencies(self, levels) -> np.ndarray:
        """Angular frequency omega_nk (au) per level, such that phase = omega t."""
        ts = self.time_scales
        if self.kind == "exact":
            return np.array([energy(lv, ts.field_au) for lv in levels])
        e_ref = energy_at(self.nbar, 0, ts.field_au)
        out = np.empty(len(levels))
        for i, lv in enumerate(levels):
            dn = lv.n - self.nbar
            out[i] = e_ref + 2.0 * math.pi * (
                dn / ts.t_cl_n
                + lv.k / (2.0 * ts.t_cl_k)
                - dn * dn / ts.t_rev_n
                + dn * lv.k / (2.0 * ts.t_rev_nk)
            )
        return out


def exact_model(ts: TimeScales, kbar: int = 0) -> PhaseModel:
    return PhaseModel("exact", ts.nbar, kbar, ts)


def taylor2_model(ts: TimeScales) -> PhaseModel:
    return PhaseModel("taylor2", ts.nbar, 0, ts)


def _check_consistency(wp: WavePacket, model: PhaseModel) -> None:
    f1, f2 = wp.field_au, model.time_scales.field_au
    if abs(f1 - f2) > 1e-12 * max(f1, f2):
        raise ConfigurationError(
            f"packet field {f1!r} au does not match model field {f2!r} au"
        )
    if wp.nbar != model.nbar:
        raise ConfigurationError(
            f"packet center n {wp.nbar} does not match model center {model.nbar}"
        )


def autocorrelation(wp: WavePacket, model: PhaseModel, t_au: float) -> complex:
    """A(t) = <packet(0)|packet(t)> at a single time."""
    _check_consistency(wp, model)
    weights = np.abs(wp.coeffs) ** 2
    omegas = model.frequencies(wp.levels)
    return complex(kernels.autocorr_series(weights, omegas, np.array([t_au]))[0])


def evolved_coefficients(wp: WavePacket, model: PhaseModel, t_au: float) -> np.ndarray:
    """Coefficient vector c_nk exp(-i omega_nk t) at time t."""
    _check_consistency(wp, model)
    omegas = model.frequencies(wp.levels)
    return wp.coeffs * np.exp(-1j * omegas * t_au)


@dataclass(frozen=True)
class Interferogram:
    """Uniformly sampled A(t): times (au), complex values, |A|^2."""

    times: np.ndarray
    values: np.ndarray
    abs2: np.ndarray

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def interferogram(
    wp: WavePacket, model: PhaseModel, t_max: float, dt: float
) -> Interferogram:
    """Sample A on the closed uniform grid 0, dt, ..., floor(t_max/dt)*dt."""
    _check_consistency(wp, model)
    t_cl_n = model.time_scales.t_cl_n
    dt_limit = t_cl_n * MAX_DT_FRACTION_OF_KEPLER_PERIOD
    if not (0.0 < dt <= dt_limit):
        raise ConfigurationError(
            f"dt must satisfy 0 < dt <= T_cl^n/20 = {dt_limit:.6e} au, got {dt!r}"
        )
    if t_max <= dt:
        raise ConfigurationError(f"t_max must exceed dt, got t_max={t_max!r}")
    n_samples = int(t_max / dt + 1e-9) + 1
    times = np.arange(n_samples, dtype=np.float64) * dt
    weights = np.abs(wp.coeffs) ** 2
    omegas = model.frequencies(wp.levels)
    values = kernels.autocorr_series(weights, omegas, times)
    abs2 = np.abs(values) ** 2
    for arr in (times, values, abs2):
        arr.flags.writeable = False
    return Interferogram(times=times, values=values, abs2=abs2)


def default_dt(ts: TimeScales) -> float:
    return ts.t_cl_n / GRID_POINTS_PER_KEPLER_PERIOD


@dataclass(frozen=True)
class PeakReport:
    """Detected peaks (times in au, heights in |A|^2) and node spacings (au)."""

    peak_times: np.ndarray
    peak_heights: np.ndarray
    node_spacings: np.ndarray


def _parabolic_refine(y: np.ndarray, i: int, times: np.ndarray) -> tuple[float, float]:
    """Sub-sample extremum location/value from a 3-point parabola around i."""
    if i <= 0 or i >= len(y) - 1:
        return float(times[i]), float(y[i])
    ym1, y0, yp1 = y[i - 1], y[i], y[i + 1]
    denom = 2.0 * (2.0 * y0 - yp1 - ym1)
    if denom == 0.0:
        return float(times[i]), float(y0)
    p = (yp1 - ym1) / denom
    height = y0 - 0.25 * (ym1 - yp1) * p
    dt = times[1] - times[0]
    return float(times[i] + p * dt), float(height)


def detect_peaks(
    ig: Interferogram, min_height: float, min_separation: float
) -> PeakReport:
    """Local maxima of |A|^2 above min_height, at least min_separation apart.

    Peak times are refined with a 3-point parabola.  When two candidates come
    closer than min_separation the higher one wins.
    """
    if not (0.0 < min_height < 1.0):
        raise DomainError(f"min_height must be in (0, 1), got {min_height!r}")
    y = ig.abs2
    idx = [
        i
        for i in range(1, len(y) - 1)
        if y[i] >= min_height and y[i] > y[i - 1] and y[i] >= y[i + 1]
    ]
    refined = [_parabolic_refine(y, i, ig.times) for i in idx]
    accepted: list[tuple[float, float]] = []
    for t, h in sorted(refined, key=lambda r: -r[1]):
        if all(abs(t - t0) >= min_separation for t0, _ in accepted):
            accepted.append((t, h))
    accepted.sort()
    return PeakReport(
        peak_times=np.array([t for t, _ in accepted]),
        peak_heights=np.array([h for _, h in accepted]),
        node_spacings=np.array([]),
    )


def node_analysis(
    ig: Interferogram,
    window_center: float,
    window_halfwidth: float,
    subpeak_frac: float = 0.1,
    max_gap_factor: float = 4.0,
) -> PeakReport:
    """Interference nodes between the sub-peaks of the structure in a window.

    Sub-peaks are interior local maxima of |A|^2 reaching at least
    subpeak_frac times the window maximum.  A node is the minimum between two
    consecutive sub-peaks; |A|^2 may drop to zero there, so nodes are
    identified from the bracketing sub-peaks rather than by their own depth.
    Sub-peak pairs separated by more than max_gap_factor times the smallest
    pair gap in the window are treated as belonging to different structures
    and contribute no node (this separates neighbouring peak clusters when the
    window spans several).  Both knobs are implementation choices.

    Returns the sub-peaks and the spacings between consecutive nodes of the
    same structure; node_spacings is empty for windows holding one smooth
    peak.
    """
    lo = window_center - window_halfwidth
    hi = window_center + window_halfwidth
    if lo < ig.times[0] - 1e-9 or hi > ig.times[-1] + 1e-9:
        raise DomainError(
            f"window [{lo:.6e}, {hi:.6e}] au lies outside the sampled range "
            f"[{ig.times[0]:.6e}, {ig.times[-1]:.6e}] au"
        )
    sel = (ig.times >= lo) & (ig.times <= hi)
    times = ig.times[sel]
    y = ig.abs2[sel]
    if len(y) < 3:
        raise DomainError("window contains fewer than 3 samples")

    # a flat window (e.g. a single-level packet, |A| = 1) has no structure;
    # without this guard rounding jitter would masquerade as sub-peaks
    if float(np.max(y)) - float(np.min(y)) <= 1e-9 * float(np.max(y)):
        empty = np.array([])
        return PeakReport(peak_times=empty, peak_heights=empty.copy(),
                          node_spacings=empty.copy())

    threshold = subpeak_frac * float(np.max(y))
    sub_idx = [
        i
        for i in range(1, len(y) - 1)
        if y[i] >= threshold and y[i] > y[i - 1] and y[i] >= y[i + 1]
    ]
    refined = [_parabolic_refine(y, i, times) for i in sub_idx]
    peak_times = np.array([t for t, _ in refined])
    peak_heights = np.array([h for _, h in refined])

    spacings: list[float] = []
    if len(sub_idx) >= 2:
        gaps = np.diff(peak_times)
        gap_limit = max_gap_factor * float(np.min(gaps))
        group: list[float] = []
        for a, b, gap in zip(sub_idx[:-1], sub_idx[1:], gaps):
            if gap > gap_limit:
                group = []
                continue
            m = a + int(np.argmin(y[a : b + 1]))
            t_node, _ = _parabolic_refine(y, m, times)
            group.append(t_node)
            if len(group) >= 2:
                spacings.append(group[-1] - group[-2])

    return PeakReport(
        peak_times=peak_times,
        peak_heights=peak_heights,
        node_spacings=np.array(spacings),
    )


def format_float(x: float) -> str:
    """Full-double-precision text form used by all CSV output."""
    return f"{x:.17g}"


def write_csv(ig: Interferogram, fh) -> None:
    """CSV rows t_ps,re_A,im_A,abs2 in time order, 17 significant digits."""
    fh.write("t_ps,re_A,im_A,abs2\n")
    for t, v, a in zip(ig.times, ig.values, ig.abs2):
        fh.write(
            f"{format_float(time_to_ps(float(t)))},{format_float(v.real)},"
            f"{format_float(v.imag)},{format_float(float(a))}\n"
        )
