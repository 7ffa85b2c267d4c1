from fractions import Fraction

import pytest

from starkrev import core, dynamics, packet


def _figure_setup(kind: str, ratio: Fraction):
    if kind == "classical":
        f = core.solve_field_for_classical_ratio(24, ratio)
    else:
        f = core.solve_field_for_revival_ratio(24, ratio)
    ts = core.time_scales(24, f)
    wp = packet.build_packet(packet.PacketSpec(nbar=24, field_au=f))
    return ts, wp, dynamics.taylor2_model(ts)


@pytest.fixture(scope="session")
def fig1():
    """Two-cycle beat configuration: classical ratio 2/13 (F ~ 794.8 V/cm)."""
    return _figure_setup("classical", Fraction(2, 13))


@pytest.fixture(scope="session")
def fig2():
    """Every-cycle beat configuration: classical ratio 1/6 (F ~ 861.0 V/cm)."""
    return _figure_setup("classical", Fraction(1, 6))


@pytest.fixture(scope="session")
def fig3():
    """Full-revival configuration: revival ratio 1/12 (F ~ 645.8 V/cm)."""
    return _figure_setup("revival", Fraction(1, 12))


@pytest.fixture(scope="session")
def fig3_taylor2_full(fig3):
    """taylor2 interferogram spanning [0, t_rev] at the default grid."""
    ts, wp, model = fig3
    dt = dynamics.default_dt(ts)
    return dynamics.interferogram(wp, model, ts.t_rev_nk + dt / 2, dt)


@pytest.fixture(scope="session")
def fig3_exact_full(fig3):
    ts, wp, _ = fig3
    dt = dynamics.default_dt(ts)
    return dynamics.interferogram(wp, dynamics.exact_model(ts), ts.t_rev_nk + dt / 2, dt)


@pytest.fixture(scope="session")
def fig4_interferogram(fig3):
    """taylor2 interferogram covering the half-revival neighbourhood."""
    ts, wp, model = fig3
    dt = dynamics.default_dt(ts)
    return dynamics.interferogram(wp, model, ts.t_rev_nk / 2 + 2.5 * ts.t_cl_k, dt)
