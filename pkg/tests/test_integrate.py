"""Outward and inward continuation of the series, handoffs, assembly."""

import math

import numpy as np
import pytest

from yahil import integrate, model, sonic


LEFT_TERMINALS = {"friedman_crossing", "omega_turn", "sonic_approach", "origin"}


def _mid_series(frozen, key, n_max=60):
    entry = frozen["entries"][key]
    return sonic.expand(float(entry["ystar_ref"]), float(key), n_max=n_max)


def test_right_extension_reaches_the_far_field(frozen):
    ser = _mid_series(frozen, "1.2")
    ext = integrate.extend_right(ser)
    assert ext.terminal == "far_field"
    assert ext.ok
    assert np.all(np.diff(ext.y) > 0)
    assert ext.y[-1] == pytest.approx(1e4 * ser.ystar, rel=1e-6)
    assert all(m.passed for m in ext.monitors), \
        [(m.name, m.worst_value) for m in ext.monitors if not m.passed]
    # power-law tail: fitted amplitudes are positive and well converged
    assert ext.fit["k1"] > 0
    assert ext.fit["k2"] > 0
    assert ext.fit["k1_residual"] < 1e-3
    assert ext.fit["k2_residual"] < 1e-3


def test_far_field_seed_reproduces_the_static_tail():
    """Seeding at the lower window endpoint lands on the exact power law."""
    g = 1.2
    y_f, _ = model.window(g)
    ser = sonic.expand(y_f, g, n_max=60, branch=1)
    assert ser.omega0 == pytest.approx(2.0 - g, abs=1e-12)
    assert ser.R == pytest.approx(-2.0 / (2.0 - g), rel=1e-10)
    assert abs(ser.W) < 1e-10
    ext = integrate.extend_right(ser, y_max=20.0 * y_f)
    sel = ext.y <= 10.0 * y_f
    rho_ff, omega_ff = model.far_field(ext.y[sel], g)
    assert np.max(np.abs(ext.rho[sel] / rho_ff - 1.0)) < 1e-10
    assert np.max(np.abs(ext.omega[sel] - omega_ff)) < 1e-10 * (2.0 - g)


def test_left_extension_terminates_with_a_known_label(frozen):
    # the 1.05 midpoint sits below its critical sonic point (inward run
    # turns), the 1.2 midpoint sits above it (inward run crosses the
    # uniform-density value); both sides of the bisection get exercised
    expected = {"1.05": "omega_turn", "1.2": "friedman_crossing"}
    for key, label in expected.items():
        ser = _mid_series(frozen, key)
        ext = integrate.extend_left(ser)
        assert ext.side == "left"
        assert ext.terminal in LEFT_TERMINALS
        assert np.all(np.diff(ext.y) > 0)  # stored ascending regardless
        assert all(m.passed for m in ext.monitors)
        assert ext.terminal == label
        assert ext.y_terminal > 0


def test_handoff_between_series_and_restarted_integration(frozen):
    ser = _mid_series(frozen, "1.2")
    for side in ("left", "right"):
        hand = integrate.handoff(ser, side)
        assert hand.side == side
        assert hand.discrepancy < 1e-8, (side, hand.discrepancy)


def test_assembled_solution_is_coherent(solve_for):
    sol = solve_for(1.2).solution
    y, rho, omega, u = sol.y, sol.rho, sol.omega, sol.u
    assert np.all(np.diff(y) > 0)
    assert np.all(rho > 0)
    assert np.all(omega > 0)
    # infall velocity everywhere, approaching zero far out
    assert np.all(u < 0)
    assert abs(u[-1]) < abs(u[len(u) // 2])
    # the sound-speed gap changes sign exactly once, at the sonic point
    # (the grid contains the sonic node itself, where G can round to 0.0,
    # so zeros are dropped before counting strict changes)
    signs = np.sign(sol.G)
    nonzero = signs[signs != 0]
    assert len(np.nonzero(np.diff(nonzero))[0]) == 1
    y_flip = y[np.argmax(sol.G <= 0)]
    assert y_flip == pytest.approx(sol.ystar, rel=1e-2)
    # stored G and h columns reproduce the defining expressions
    assert np.allclose(sol.G, model.speed_gap(y, rho, omega, sol.gamma),
                       rtol=0, atol=0)
    assert np.allclose(sol.h, model.drift(rho, omega, sol.gamma),
                       rtol=0, atol=0)
    assert sol.left_terminal in LEFT_TERMINALS
    assert sol.handoff_discrepancy[0] < 1e-8
    assert sol.handoff_discrepancy[1] < 1e-8


def test_invariant_report_on_a_critical_solution(solve_for):
    sol = solve_for(1.2).solution
    inv = integrate.verify_invariants(sol)
    assert len(inv) == 8
    assert all(i.passed for i in inv), [(i.name, i.worst_value)
                                        for i in inv if not i.passed]
    names = {i.name for i in inv}
    assert "origin_omega" in names
    assert "origin_density" in names


def test_mass_profile_slope_in_the_tail(solve_for):
    sol = solve_for(1.2).solution
    sel = sol.y > 0.2 * sol.y[-1]
    m = model.local_mass(sol.y[sel], sol.rho[sel], sol.omega[sel], sol.gamma)
    slope = np.diff(np.log(m)) / np.diff(np.log(sol.y[sel]))
    target = model.mass_log_slope(sol.gamma)
    assert np.max(np.abs(slope - target)) < 1e-2


def test_mass_is_monotone_and_positive(solve_for):
    sol = solve_for(1.2).solution
    m = model.local_mass(sol.y, sol.rho, sol.omega, sol.gamma)
    assert np.all(m > 0)
    assert np.all(np.diff(m) > 0)
