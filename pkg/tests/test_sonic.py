"""Sonic-point seed and series cascade, pinned against independent oracles.

The frozen reference (tests/oracles/frozen.json) was produced at 60 digits by
probing the raw order-by-order relations with no closed-form matrix entries
involved, so agreement here pins the whole closed-form chain at once.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from yahil import model, sonic

from oracles.partitions import power_series


GAMMAS = (1.05, 1.1, 1.2, 1.3)


# ---------------------------------------------------------------------------
# frozen reference comparison
# ---------------------------------------------------------------------------

def test_series_matches_frozen_reference(frozen):
    n_top = frozen["n_top"]
    for key, entry in frozen["entries"].items():
        g, ys = float(key), float(entry["ystar_ref"])
        ser = sonic.expand(ys, g, n_max=n_top, branch=1)
        assert ser.omega0 == pytest.approx(float(entry["omega0_ref"]), rel=1e-12)
        assert ser.rho0 == pytest.approx(float(entry["rho0_ref"]), rel=1e-12)
        assert ser.R == pytest.approx(float(entry["R1"]), rel=1e-12)
        assert ser.W == pytest.approx(float(entry["W1"]), rel=1e-12)
        for n in range(n_top + 1):
            assert ser.rho[n] == pytest.approx(float(entry["rho"][n]), rel=1e-10), \
                (key, "rho", n)
            assert ser.omega[n] == pytest.approx(float(entry["omega"][n]), rel=1e-10), \
                (key, "omega", n)
            assert ser.P[n] == pytest.approx(float(entry["P"][n]), rel=1e-10), \
                (key, "P", n)


def test_second_branch_matches_frozen_slopes(frozen):
    for key, entry in frozen["entries"].items():
        g, ys = float(key), float(entry["ystar_ref"])
        ser = sonic.expand(ys, g, n_max=2, branch=2)
        assert ser.R == pytest.approx(float(entry["R2"]), rel=1e-12)
        assert ser.W == pytest.approx(float(entry["W2"]), rel=1e-12)


# ---------------------------------------------------------------------------
# seed root
# ---------------------------------------------------------------------------

def test_root_clamps_at_window_endpoints():
    for g in GAMMAS:
        y_f, y_F = model.window(g)
        assert sonic.omega0_root(y_f, g) == pytest.approx(2.0 - g, abs=1e-12)
        assert sonic.omega0_root(y_F, g) == pytest.approx((4.0 - 3.0 * g) / 3.0,
                                                          abs=1e-12)


def test_root_is_strictly_decreasing_in_ystar():
    for g in GAMMAS:
        y_f, y_F = model.window(g)
        ys = np.linspace(y_f, y_F, 60)
        roots = [sonic.omega0_root(float(v), g) for v in ys]
        assert all(a > b for a, b in zip(roots, roots[1:]))


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=1.001, max_value=1.332),
       st.floats(min_value=0.02, max_value=0.98))
def test_seed_identities_hold(g, frac):
    """Root residual, admissible range, slope quadratics, W line."""
    y_f, y_F = model.window(g)
    ys = y_f + frac * (y_F - y_f)
    o0 = sonic.omega0_root(ys, g)
    assert (4.0 - 3.0 * g) / 3.0 < o0 < 2.0 - g
    r1 = model.seed_density(o0, g)
    r2 = model.sonic_density(o0, ys, g)
    assert r2 == pytest.approx(r1, rel=1e-9)
    for R, W in sonic.seed_slopes(o0, g):
        assert W == pytest.approx(4.0 - 3.0 * g - 3.0 * o0 - o0 * R, rel=1e-9,
                                  abs=1e-11)
        # both first-order quadratics must vanish on each branch
        q1 = ((g - 1) * o0**2 * R**2 - 2 * o0 * W * R
              + (g - 1) * (o0 + 2 - g) * R - 2 * o0 * W
              + (g - 1) * (2 - g) * W / o0)
        q2 = (2 * o0 * W**2 - (g - 1) * o0**2 * R * W
              + W * (-2 * (4 - 3 * g - 3 * o0) * o0 + (g - 1) * (2 - g))
              + ((5 - 3 * g) * o0**2 + (5 - 3 * g) * (g - 1) * o0
                 + (g - 1) * (2 - g)) * o0 * R
              - 2 * (4 - 3 * g - 3 * o0) * o0**2)
        scale = 1.0 + abs(R) ** 2
        assert abs(q1) / scale < 1e-9
        assert abs(q2) / scale < 1e-9


def test_slope_discriminant_positive_inside_window():
    for g in GAMMAS:
        y_f, y_F = model.window(g)
        for frac in np.linspace(0.01, 0.99, 25):
            o0 = sonic.omega0_root(y_f + float(frac) * (y_F - y_f), g)
            assert sonic.slope_discriminant(o0, g) >= 0.0


# ---------------------------------------------------------------------------
# order-N linear algebra
# ---------------------------------------------------------------------------

def test_det_quadratic_matches_direct_determinant():
    rng = np.random.default_rng(7)
    for _ in range(12):
        g = float(rng.uniform(1.01, 1.33))
        y_f, y_F = model.window(g)
        ys = float(rng.uniform(y_f * 1.01, y_F * 0.99))
        o0 = sonic.omega0_root(ys, g)
        r0 = model.seed_density(o0, g)
        for branch, (R, W) in enumerate(sonic.seed_slopes(o0, g), start=1):
            A2, A1, A0 = sonic.det_quadratic_coefficients(g, o0, R, W)
            for N in range(2, 51):
                a11, a12, a21, a22 = sonic.matrix_entries(N, ys, g, r0, o0, R, W)
                det = a11 * a22 - a12 * a21
                quad = ys * ys * (A2 * N * N + A1 * N + A0)
                # the determinant itself may pass near zero between integer
                # orders, so normalise by the non-cancelling magnitude
                scale = ys * ys * (abs(A2) * N * N + abs(A1) * N + abs(A0))
                assert abs(det - quad) <= 1e-12 * scale, (g, ys, branch, N)


def test_pressure_recurrence_is_exact_in_rational_arithmetic():
    """The convolution recurrence used by the cascade,

        N rho0 P_N = sum_{k=1..N} (k g - N) rho_k P_{N-k},

    replayed over Fractions against direct partition enumeration.
    """
    rng = np.random.default_rng(11)
    for trial in range(4):
        g = Fraction(int(rng.integers(105, 133)), 100)
        coeffs = [Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 7)))]
        coeffs += [Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 7)))
                   for _ in range(8)]
        P = [Fraction(1)]
        for N in range(1, 9):
            P.append(sum((k * g - N) * (coeffs[k] / coeffs[0]) * P[N - k]
                         for k in range(1, N + 1)) / N)
        oracle = power_series(coeffs, g, 8)
        assert P == oracle


# ---------------------------------------------------------------------------
# expansion behaviour
# ---------------------------------------------------------------------------

def test_expand_rejects_out_of_window_points():
    g = 1.2
    y_f, y_F = model.window(g)
    with pytest.raises(ValueError):
        sonic.expand(0.5 * y_f, g)
    with pytest.raises(ValueError):
        sonic.expand(1.5 * y_F, g)
    with pytest.raises(ValueError):
        sonic.expand(2.0, 1.6)


def test_radius_and_growth_are_sane(frozen):
    for key, entry in frozen["entries"].items():
        g, ys = float(key), float(entry["ystar_ref"])
        ser = sonic.expand(ys, g, n_max=60)
        assert ser.n == 60
        assert ser.growth > 0.0
        assert 0.0 < ser.radius <= 0.45 * ys
        # coefficients stay bounded by the advertised growth rate
        for n in range(6, 61):
            bound = 3.0 * n**3 * ser.growth**n
            assert abs(ser.rho[n] / ser.rho0) < bound
            assert abs(ser.omega[n] / ser.omega0) < bound


def test_series_evaluators_agree_with_horner_replay(frozen):
    entry = frozen["entries"]["1.2"]
    ys = float(entry["ystar_ref"])
    ser = sonic.expand(ys, 1.2, n_max=30)
    for d in (-0.04, -0.006, 0.0, 0.01, 0.05):
        r = sum(c * d**k for k, c in enumerate(ser.rho))
        w = sum(c * d**k for k, c in enumerate(ser.omega))
        assert ser.rho_at(d) == pytest.approx(r, rel=1e-13)
        assert ser.omega_at(d) == pytest.approx(w, rel=1e-13)
        dr = sum(k * c * d**(k - 1) for k, c in enumerate(ser.rho) if k)
        dw = sum(k * c * d**(k - 1) for k, c in enumerate(ser.omega) if k)
        assert ser.drho_at(d) == pytest.approx(dr, rel=1e-12, abs=1e-12)
        assert ser.domega_at(d) == pytest.approx(dw, rel=1e-12, abs=1e-12)
        u = model.velocity(ys + d, ser.omega_at(d), 1.2)
        assert ser.u_at(d) == pytest.approx(u, rel=1e-13, abs=1e-15)


def test_series_satisfies_the_odes_inside_the_radius(frozen):
    """Derivative of the truncation vs the exact right-hand side."""
    for key, entry in frozen["entries"].items():
        g, ys = float(key), float(entry["ystar_ref"])
        ser = sonic.expand(ys, g, n_max=60)
        for d in (0.3 * ser.radius, -0.3 * ser.radius):
            y = ys + d
            dr, dw = model.rhs(y, ser.rho_at(d), ser.omega_at(d), g)
            assert ser.drho_at(d) == pytest.approx(dr, rel=1e-8), key
            assert ser.domega_at(d) == pytest.approx(dw, rel=1e-8), key
