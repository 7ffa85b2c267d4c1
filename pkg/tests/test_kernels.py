import cmath

import numpy as np
import pytest

from starkrev import kernels
from starkrev.errors import ConfigurationError


def _reference_sum(weights, omegas, times):
    # independent oracle: plain python complex arithmetic
    return np.array(
        [
            sum(w * cmath.exp(-1j * om * t) for w, om in zip(weights, omegas))
            for t in times
        ]
    )


def test_backends_match_reference():
    rng = np.random.default_rng(42)
    w = rng.random(17)
    w /= w.sum()
    om = rng.normal(scale=1e-3, size=17)
    t = rng.uniform(0, 1e6, size=64)
    ref = _reference_sum(w, om, t)
    for backend in ("numpy", "numba") if kernels.HAVE_NUMBA else ("numpy",):
        got = kernels.autocorr_series(w, om, t, backend=backend)
        assert np.max(np.abs(got - ref)) < 1e-12


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
def test_numba_matches_numpy_on_long_series():
    rng = np.random.default_rng(1)
    w = rng.random(72)
    w /= w.sum()
    om = rng.normal(scale=1e-3, size=72)
    t = np.arange(20000) * 1700.0
    a = kernels.autocorr_series(w, om, t, backend="numpy")
    b = kernels.autocorr_series(w, om, t, backend="numba")
    assert np.max(np.abs(a - b)) < 1e-13


def test_repeated_calls_bit_identical():
    rng = np.random.default_rng(2)
    w = rng.random(40)
    w /= w.sum()
    om = rng.normal(scale=1e-3, size=40)
    t = np.arange(5000) * 900.0
    a = kernels.autocorr_series(w, om, t)
    b = kernels.autocorr_series(w, om, t)
    assert np.array_equal(a, b)


def test_env_flag_selects_backend(monkeypatch):
    monkeypatch.setenv(kernels.ENV_VAR, "numpy")
    assert kernels.active_backend() == "numpy"
    monkeypatch.setenv(kernels.ENV_VAR, "auto")
    assert kernels.active_backend() in ("numpy", "numba")
    monkeypatch.setenv(kernels.ENV_VAR, "fortran")
    with pytest.raises(ConfigurationError):
        kernels.active_backend()
    if kernels.HAVE_NUMBA:
        monkeypatch.setenv(kernels.ENV_VAR, "numba")
        assert kernels.active_backend() == "numba"


def test_shape_mismatch_rejected():
    with pytest.raises(ConfigurationError):
        kernels.autocorr_series(np.ones(3), np.ones(4), np.zeros(2))
