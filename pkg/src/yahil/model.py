"""Self-similar variables and pointwise relations for isothermal-like collapse.

Everything here is algebra on the similarity profiles: no integration, no
root finding beyond simple closed forms.  The similarity coordinate is
y = r / (sqrt(kappa) * (-t)**(2-gamma)) and the unknowns are the rescaled
density rho(y) > 0 and the reduced velocity omega(y) = u/y + (2-gamma),
in units where kappa = 1.  The adiabatic exponent gamma must lie in
(1, 4/3): above 4/3 the similarity ansatz changes character and every
denominator (4 - 3*gamma) below degenerates.

All functions accept scalars or numpy arrays in the state arguments.
"""

import math

import numpy as np

FOUR_THIRDS = 4.0 / 3.0


class VerificationError(Exception):
    """A constructed profile failed one of its defining checks."""


class ShootAmbiguity(VerificationError):
    """Bisection observations were not monotone in the shooting parameter."""


def validate_gamma(gamma):
    g = float(gamma)
    if not (1.0 < g < FOUR_THIRDS):
        raise ValueError(f"gamma must lie strictly inside (1, 4/3), got {gamma!r}")
    return g


def speed_gap(y, rho, omega, gamma):
    """gamma*rho**(gamma-1) - y**2*omega**2.

    Positive where the flow is subsonic in the similarity frame, zero at a
    sonic point, negative outside.  Shows up as the shared denominator of
    both profile derivatives.
    """
    return gamma * rho ** (gamma - 1.0) - y * y * omega * omega


def drift(rho, omega, gamma):
    """Numerator factor h shared by both derivatives.

    h = 2*omega**2 + (gamma-1)*omega - 4*pi*rho*omega/(4-3*gamma)
        + (gamma-1)*(2-gamma)
    """
    return (2.0 * omega * omega + (gamma - 1.0) * omega
            - 4.0 * math.pi * rho * omega / (4.0 - 3.0 * gamma)
            + (gamma - 1.0) * (2.0 - gamma))


def rhs(y, rho, omega, gamma):
    """Pointwise (rho', omega') away from sonic points."""
    G = speed_gap(y, rho, omega, gamma)
    h = drift(rho, omega, gamma)
    rho_p = y * rho * h / G
    omega_p = (4.0 - 3.0 * gamma - 3.0 * omega) / y - y * omega * h / G
    return rho_p, omega_p


def velocity(y, omega, gamma):
    """Similarity-frame radial velocity u = y*(omega - (2-gamma)); u < 0 inflow."""
    return y * (omega - (2.0 - gamma))


def local_mass(y, rho, omega, gamma):
    """Integral of z**2*rho over (0, y), available in closed form on solutions."""
    return y ** 3 * rho * omega / (4.0 - 3.0 * gamma)


def mass_log_slope(gamma):
    """d ln m / d ln y of the far-field mass, (4-3*gamma)/(2-gamma)."""
    return (4.0 - 3.0 * gamma) / (2.0 - gamma)


def friedman_point(gamma):
    """Spatially uniform solution (rho, omega) = (1/(6*pi), (4-3*gamma)/3)."""
    return 1.0 / (6.0 * math.pi), (4.0 - 3.0 * gamma) / 3.0


def far_field_amplitude(gamma):
    """Coefficient k of the static power-law tail rho ~ k*y**(-2/(2-gamma))."""
    g = gamma
    return (g * (4.0 - 3.0 * g) / (2.0 * math.pi * (2.0 - g) ** 2)) ** (1.0 / (2.0 - g))


def far_field(y, gamma):
    """Exact static tail profile (rho, omega) with omega = 2-gamma identically."""
    k = far_field_amplitude(gamma)
    rho = k * y ** (-2.0 / (2.0 - gamma))
    if np.ndim(rho):
        return rho, np.full_like(rho, 2.0 - gamma)
    return rho, 2.0 - gamma


def seed_density(omega, gamma):
    """Density forced by h = 0 at a candidate sonic value omega (curve f1)."""
    g = gamma
    return ((4.0 - 3.0 * g) / (4.0 * math.pi * omega)
            * (2.0 * omega * omega + (g - 1.0) * omega + (g - 1.0) * (2.0 - g)))


def sonic_density(omega, ystar, gamma):
    """Density forced by G = 0 at y = ystar for a given omega (curve f2)."""
    return (ystar * ystar * omega * omega / gamma) ** (1.0 / (gamma - 1.0))


def window(gamma):
    """Interval (y_f, y_F) of sonic-point locations with an interior root.

    At the lower endpoint the sonic seed touches the far-field values, at the
    upper endpoint it touches the uniform solution; strictly inside, the two
    seed curves cross at exactly one omega in ((4-3*gamma)/3, 2-gamma).
    """
    g = float(gamma)
    y_f = (math.sqrt(g) / (2.0 - g)
           * ((4.0 - 3.0 * g) / (2.0 * math.pi)) ** ((g - 1.0) / 2.0))
    y_F = 3.0 / (4.0 - 3.0 * g) * math.sqrt(g * (6.0 * math.pi) ** (1.0 - g))
    return y_f, y_F


def scaling_exponents(gamma):
    """Exponents of the invariance group acting on physical-space fields.

    Under r -> r/lam the time rescales by lam**(-1/(2-gamma)) and the fields
    pick up the powers returned here; self-similar profiles are fixed points.
    """
    g = float(gamma)
    return {
        "time": 1.0 / (2.0 - g),
        "rho": -2.0 / (2.0 - g),
        "u": -(g - 1.0) / (2.0 - g),
    }
