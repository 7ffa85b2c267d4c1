"""Hot numeric kernels: phase-sum evaluation of the autocorrelation series.

Both phase models reduce to A(t) = sum_j w_j exp(-i omega_j t) with real
weights, so a single kernel serves the whole package.  A numba-compiled
version is used when available; the STARKREV_KERNEL environment variable
("numba" or "numpy") forces a backend.  Both backends accumulate levels in a
fixed order, so repeated runs are bit-identical within a backend.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConfigurationError

ENV_VAR = "STARKREV_KERNEL"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def autocorr_series_numpy(
    weights: np.ndarray, omegas: np.ndarray, times: np.ndarray
) -> np.ndarray:
    """Pure-numpy reference path, accumulated level by level."""
    out = np.zeros(times.shape[0], dtype=np.complex128)
    for j in range(omegas.shape[0]):
        out += weights[j] * np.exp(-1j * (omegas[j] * times))
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _autocorr_series_jit(weights, omegas, times):
        n_t = times.shape[0]
        n_j = omegas.shape[0]
        out = np.empty(n_t, dtype=np.complex128)
        for i in range(n_t):
            re = 0.0
            im = 0.0
            t = times[i]
            for j in range(n_j):
                ph = omegas[j] * t
                re += weights[j] * np.cos(ph)
                im -= weights[j] * np.sin(ph)
            out[i] = complex(re, im)
        return out

    def autocorr_series_numba(
        weights: np.ndarray, omegas: np.ndarray, times: np.ndarray
    ) -> np.ndarray:
        return _autocorr_series_jit(
            np.ascontiguousarray(weights, dtype=np.float64),
            np.ascontiguousarray(omegas, dtype=np.float64),
            np.ascontiguousarray(times, dtype=np.float64),
        )


def resolve_backend(name: str | None = None) -> str:
    """Pick the kernel backend: explicit arg > env var > auto."""
    if name is None:
        name = os.environ.get(ENV_VAR, "auto")
    name = name.lower()
    if name in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if name == "numpy":
        return "numpy"
    if name == "numba":
        if not HAVE_NUMBA:
            raise ConfigurationError(
                f"{ENV_VAR}=numba requested but numba is not importable"
            )
        return "numba"
    raise ConfigurationError(f"unknown kernel backend {name!r}")


def active_backend() -> str:
    return resolve_backend()


def autocorr_series(
    weights: np.ndarray,
    omegas: np.ndarray,
    times: np.ndarray,
    backend: str | None = None,
) -> np.ndarray:
    """A(t_i) = sum_j weights[j] * exp(-i omegas[j] t_i) for each sample."""
    weights = np.asarray(weights, dtype=np.float64)
    omegas = np.asarray(omegas, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    if weights.shape != omegas.shape:
        raise ConfigurationError("weights and omegas must have matching shapes")
    if resolve_backend(backend) == "numba":
        return autocorr_series_numba(weights, omegas, times)
    return autocorr_series_numpy(weights, omegas, times)
