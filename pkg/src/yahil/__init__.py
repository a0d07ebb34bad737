"""Self-similar gravitational collapse profiles for 1 < gamma < 4/3.

The package constructs the classical self-similar collapse solution of
the isentropic Euler-Poisson system: a Taylor expansion through the
sonic point where the profile ODE degenerates, bidirectional extension
to the origin and the far field, a shooting search for the critical
sonic position, and a rigorous interval-arithmetic suite certifying the
sign conditions the construction rests on.
"""

from . import certify, cli, integrate, model, shoot, sonic
from .model import (
    FOUR_THIRDS,
    ShootAmbiguity,
    VerificationError,
    far_field,
    far_field_amplitude,
    friedman_point,
    validate_gamma,
    window,
)
from .shoot import critical_point, solve
from .sonic import SonicSeries, expand

__version__ = "0.1.0"

__all__ = [
    "FOUR_THIRDS",
    "ShootAmbiguity",
    "VerificationError",
    "SonicSeries",
    "certify",
    "cli",
    "critical_point",
    "expand",
    "far_field",
    "far_field_amplitude",
    "friedman_point",
    "integrate",
    "model",
    "shoot",
    "solve",
    "sonic",
    "validate_gamma",
    "window",
    "__version__",
]
