"""Checks of the algebraic layer: field equations, special points, window."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from yahil import model


GAMMAS = (1.05, 1.1, 1.2, 1.3)


def test_window_matches_frozen(frozen):
    for key, entry in frozen["entries"].items():
        g = float(key)
        y_f, y_F = model.window(g)
        assert y_f == pytest.approx(float(entry["y_f"]), rel=1e-14)
        assert y_F == pytest.approx(float(entry["y_F"]), rel=1e-14)


def test_far_field_amplitude_matches_frozen(frozen):
    for key, entry in frozen["entries"].items():
        k = model.far_field_amplitude(float(key))
        assert k == pytest.approx(float(entry["k_far"]), rel=1e-14)


def test_window_is_ordered_and_positive():
    for g in np.linspace(1.0 + 1e-6, model.FOUR_THIRDS - 1e-6, 50):
        y_f, y_F = model.window(float(g))
        assert 0.0 < y_f < y_F


def test_window_isothermal_limit():
    # as gamma -> 1 the endpoints close on (1, 3)
    y_f, y_F = model.window(1.0 + 1e-10)
    assert y_f == pytest.approx(1.0, abs=1e-6)
    assert y_F == pytest.approx(3.0, abs=1e-6)


def test_uniform_collapse_point_is_stationary():
    """Both derivatives vanish on the uniform-density point, any y."""
    for g in GAMMAS:
        rho_F, omega_F = model.friedman_point(g)
        assert rho_F == pytest.approx(1.0 / (6.0 * math.pi), rel=1e-15)
        assert omega_F == pytest.approx((4.0 - 3.0 * g) / 3.0, rel=1e-15)
        assert model.drift(rho_F, omega_F, g) == pytest.approx(0.0, abs=1e-16)
        for y in (0.3, 1.0, 7.0):
            dr, dw = model.rhs(y, rho_F, omega_F, g)
            assert abs(dr) < 1e-15
            assert abs(dw) < 1e-15


def test_far_field_solves_the_field_equations():
    """The static power-law tail must satisfy both equations identically.

    With omega constant the second equation reduces to y^2 h = -2/(2-g) G
    and the first to the same relation, so a single residual covers both.
    """
    for g in GAMMAS:
        for y in np.geomspace(0.5, 50.0, 20):
            rho, omega = model.far_field(float(y), g)
            assert omega == 2.0 - g
            G = model.speed_gap(y, rho, omega, g)
            h = model.drift(rho, omega, g)
            res = y * y * h + 2.0 / (2.0 - g) * G
            scale = abs(y * y * h) + abs(G) + 1e-300
            assert abs(res) / scale < 1e-13


def test_far_field_profile_closes_under_the_odes():
    g = 1.2
    y = np.geomspace(2.0, 200.0, 12)
    rho, omega = model.far_field(y, g)
    drho, domega = model.rhs(y, rho, omega, g)
    # d(rho)/dy of k y^(-2/(2-g)) is -2/(2-g) rho / y
    expect = -2.0 / (2.0 - g) * rho / y
    assert np.allclose(drho, expect, rtol=1e-11)
    assert np.max(np.abs(domega)) < 1e-13 * np.max(np.abs(drho))


def test_rhs_broadcasts_like_the_scalar_version():
    g = 1.1
    y = np.array([0.7, 1.3, 2.9, 8.0])
    rho = np.array([0.4, 0.12, 0.05, 0.008])
    omega = np.array([0.5, 0.6, 0.7, 0.83])
    dr, dw = model.rhs(y, rho, omega, g)
    for i in range(len(y)):
        sr, sw = model.rhs(float(y[i]), float(rho[i]), float(omega[i]), g)
        assert dr[i] == sr
        assert dw[i] == sw
    G = model.speed_gap(y, rho, omega, g)
    h = model.drift(rho, omega, g)
    assert np.allclose(dr, y * rho * h / G, rtol=0, atol=0)


def test_mass_slope_of_the_far_field():
    for g in GAMMAS:
        y = np.geomspace(10.0, 1000.0, 40)
        rho, omega = model.far_field(y, g)
        m = model.local_mass(y, rho, omega, g)
        slope = np.diff(np.log(m)) / np.diff(np.log(y))
        assert np.allclose(slope, model.mass_log_slope(g), rtol=1e-9)
        assert model.mass_log_slope(g) == pytest.approx(
            (4.0 - 3.0 * g) / (2.0 - g), rel=1e-15)


def test_velocity_sign_and_form():
    g = 1.25
    y = 1.7
    for omega in (0.1, 0.4, 2.0 - g):
        u = model.velocity(y, omega, g)
        assert u == pytest.approx(y * (omega - (2.0 - g)), rel=1e-15)
    assert model.velocity(y, 2.0 - g, g) == 0.0


def test_scaling_exponents_are_consistent():
    for g in GAMMAS:
        ex = model.scaling_exponents(g)
        assert ex["time"] == pytest.approx(1.0 / (2.0 - g), rel=1e-15)
        assert ex["rho"] == pytest.approx(-2.0 / (2.0 - g), rel=1e-15)
        assert ex["u"] == pytest.approx(-(g - 1.0) / (2.0 - g), rel=1e-15)
        # density exponent equals -2 times the time exponent by construction
        assert ex["rho"] == pytest.approx(-2.0 * ex["time"], rel=1e-15)


@given(st.floats(min_value=1.0 + 1e-9, max_value=model.FOUR_THIRDS - 1e-9))
def test_validate_gamma_accepts_interior(g):
    model.validate_gamma(g)


@pytest.mark.parametrize("bad", [1.0, model.FOUR_THIRDS, 0.9, 1.5, 2.0,
                                 math.nan, math.inf, -1.2])
def test_validate_gamma_rejects_exterior(bad):
    with pytest.raises(ValueError):
        model.validate_gamma(bad)
