import math

import pytest
from hypothesis import given, strategies as st

from starkrev import units
from starkrev.errors import DomainError


def test_field_unit_definition():
    # one atomic unit of field, by definition of the conversion constant
    assert units.field_from_volts_per_cm(5.142206747e9) == pytest.approx(1.0, abs=1e-15)


def test_field_conversion_two_cycle_value():
    f = units.field_from_volts_per_cm(794.8)
    assert f == pytest.approx(794.8 / 5.142206747e9, abs=0.0)
    assert f == pytest.approx(1.5456e-7, abs=1e-10)
    # this field sets the classical commensurability near 2/13
    assert 3.0 * f * 24**4 == pytest.approx(2.0 / 13.0, abs=1e-4)


def test_field_conversion_revival_value():
    f = units.field_from_volts_per_cm(645.8)
    assert f == pytest.approx(1.2559e-7, abs=1e-10)
    assert 2.0 * f * 24**4 == pytest.approx(1.0 / 12.0, abs=1e-4)


def test_time_zero_maps_to_zero():
    assert units.time_to_ps(0.0) == 0.0


def test_time_kepler_period_in_ps():
    t_kepler = 2.0 * math.pi * 24**3
    assert units.time_to_ps(86858.5) == pytest.approx(2.101, abs=1e-3)
    assert units.time_to_ps(t_kepler) == pytest.approx(
        t_kepler * 2.418884327e-17 * 1e12, rel=1e-15
    )


def test_time_revival_in_ps():
    f = units.field_from_volts_per_cm(645.8)
    t_rev = 2.0 * math.pi / (3.0 * f)
    assert units.time_to_ps(1.66769e7) == pytest.approx(403.4, abs=0.1)
    assert units.time_to_ps(t_rev) == pytest.approx(403.4, abs=0.1)


@given(st.floats(min_value=1e-12, max_value=1e12))
def test_field_round_trip(f_vcm):
    back = units.field_to_volts_per_cm(units.field_from_volts_per_cm(f_vcm))
    assert abs(back - f_vcm) <= 1e-12 * f_vcm


@given(st.floats(min_value=1e-12, max_value=1e12))
def test_time_round_trip(t_ps):
    back = units.time_to_ps(units.time_from_ps(t_ps))
    assert abs(back - t_ps) <= 1e-12 * t_ps


@given(
    st.floats(min_value=1e-9, max_value=1e9),
    st.floats(min_value=1e-9, max_value=1e9),
)
def test_conversions_monotone(a, b):
    lo, hi = sorted((a, b))
    if lo < hi:
        assert units.field_from_volts_per_cm(lo) < units.field_from_volts_per_cm(hi)
        assert units.time_to_ps(lo) < units.time_to_ps(hi)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_field_rejects_nonpositive(bad):
    with pytest.raises(DomainError):
        units.field_from_volts_per_cm(bad)
    with pytest.raises(DomainError):
        units.field_to_volts_per_cm(bad)


def test_time_rejects_nonfinite():
    with pytest.raises(DomainError):
        units.time_to_ps(float("nan"))
