"""Taylor expansion of the collapse profile about a prescribed sonic point.

Both profile derivatives share the vanishing denominator
G = gamma*rho**(gamma-1) - y**2*omega**2, so a smooth passage through
y = ystar forces an algebraic cascade: the zeroth-order pair (rho0, omega0)
must lie on the crossing of the two seed curves, the first-order pair is a
root of a coupled quadratic system with two real branches, and every higher
order solves a 2x2 linear system whose matrix depends on the seed and on the
order N but not on the unknowns.  This module builds that cascade.

The recurrence is written against an arithmetic context (`FloatContext` by
default) so the identical code path can be replayed with multiprecision or
symbolic numbers in the tests; only +, -, *, /, integer powers and the
context hooks (pi, sqrt, power, sum) are used.

Convolution caches make the whole expansion O(n**2): at each order the
nonlinear terms are first formed with the top coefficients set to zero, the
linear system is solved, and the caches are then patched for the now-known
tops.  The constant term of the speed-gap series is pinned to exact zero,
which is the defining property of the sonic point; leaving the rounding
residue of the root solve in it would feed a spurious k = N term into every
later order.
"""

import math
from dataclasses import dataclass, field

from . import model


class FloatContext:
    """Binary64 arithmetic with compensated summation."""
    pi = math.pi

    @staticmethod
    def sqrt(x):
        return math.sqrt(x)

    @staticmethod
    def power(x, a):
        # the seed exponent 1/(gamma-1) reaches 1000 at gamma = 1.001, so
        # sonic_density overflows near the wide end of the window; the
        # root bracketing only needs the sign, so a saturated inf is fine
        try:
            return float(x) ** float(a)
        except OverflowError:
            return math.inf if abs(x) > 1 else 0.0

    @staticmethod
    def sum(xs):
        return math.fsum(xs)


FLOAT_CTX = FloatContext()


def seed_density(omega, gamma, ctx=FLOAT_CTX):
    """Density on the drift-free curve h = 0 at sonic value omega."""
    g = gamma
    return ((4 - 3 * g) / (4 * ctx.pi * omega)
            * (2 * omega * omega + (g - 1) * omega + (g - 1) * (2 - g)))


def sonic_density(omega, ystar, gamma, ctx=FLOAT_CTX):
    """Density closing the speed gap at ystar for a given omega."""
    return ctx.power(ystar * ystar * omega * omega / gamma, 1 / (gamma - 1))


def seed_residual(omega, ystar, gamma, ctx=FLOAT_CTX):
    return sonic_density(omega, ystar, gamma, ctx) - seed_density(omega, gamma, ctx)


def omega0_root(ystar, gamma, ctx=FLOAT_CTX, iters=80, newton=2):
    """Sonic value omega0 at ystar: the unique root of the seed residual.

    The residual is strictly increasing in omega on the admissible interval
    ((4-3*gamma)/3, 2-gamma) and strictly decreasing in ystar, so plain
    bisection is safe; a couple of Newton steps polish the last bits.  If
    ystar sits at or beyond an endpoint of the admissible window the root is
    clamped to the corresponding interval endpoint and returned exactly.
    """
    g = gamma
    lo, hi = (4 - 3 * g) / 3, 2 - g

    def phi(o):
        return seed_residual(o, ystar, g, ctx)

    if phi(hi) <= 0:
        return hi
    if phi(lo) >= 0:
        return lo
    for _ in range(iters):
        mid = (lo + hi) / 2
        if phi(mid) < 0:
            lo = mid
        else:
            hi = mid
    o = (lo + hi) / 2
    c = (g - 1) * (2 - g)
    for _ in range(newton):
        f2 = sonic_density(o, ystar, g, ctx)
        d = 2 / ((g - 1) * o) * f2 - (4 - 3 * g) / (4 * ctx.pi) * (2 - c / (o * o))
        if d == 0:
            break
        step = (f2 - seed_density(o, g, ctx)) / d
        o = o - step
        if not ((4 - 3 * g) / 3 < o < 2 - g):
            o = (lo + hi) / 2
            break
    return o


def slope_discriminant(omega0, gamma):
    """Cubic in omega0 whose product with omega0**3 is the branch discriminant."""
    g, o = gamma, omega0
    return (-4 * (4 - 3 * g) * (g + 1) * (g - 1) * (2 - g)
            + (57 - 114 * g + 73 * g * g - 12 * g ** 3) * o
            - 8 * (14 - 15 * g + 3 * g * g) * o * o
            + 8 * (5 - 3 * g) * o ** 3)


def seed_slopes(omega0, gamma, ctx=FLOAT_CTX):
    """Both first-order branches ((R1, W1), (R2, W2)).

    R = ystar*rho1/rho0 and W = ystar*omega1 solve a quadratic after the
    linear relation W = 4 - 3*gamma - 3*omega0 - omega0*R eliminates W.
    Branch 1 takes the minus root: the steeper density decline, the one a
    profile that continues to a static tail must follow.
    """
    g, o = gamma, omega0
    rad = ctx.sqrt(o ** 3 * slope_discriminant(o, g))
    den = 2 * o ** 3 * (g + 1)
    R1 = ((9 - 7 * g) * o * o - 8 * o ** 3 - rad) / den
    R2 = ((9 - 7 * g) * o * o - 8 * o ** 3 + rad) / den
    return ((R1, 4 - 3 * g - 3 * o - o * R1),
            (R2, 4 - 3 * g - 3 * o - o * R2))


def matrix_entries(N, ystar, gamma, rho0, omega0, R, W):
    """Order-N system matrix ((a11, a12), (a21, a22)).

    Acting on (rho_N, omega_N) it reproduces minus the top-coefficient part
    of the two order-N relations, so the solve step is A x = (F, G) with
    F, G the relations evaluated at zero tops.
    """
    g, o, ys = gamma, omega0, ystar
    c = (g - 1) * (2 - g)
    a11 = ys * ((N + 1) * (g - 1) * o * o * R - 2 * N * W * o
                - 2 * (N - 1) * o * o + (g - 1) * o + c)
    a12 = ys * rho0 * (-2 * R * o - 2 * o + c / o)
    a21 = (ys / rho0) * (o * o * (g - 1) * (W - (4 - 3 * g - 3 * o))
                         - o * (2 * o * o + (g - 1) * o + c))
    a22 = ys * (N * (g - 1) * o * o * R - 2 * (N + 1) * W * o
                - 2 * (N + 2) * o * o + 2 * (4 - 3 * g) * o - c)
    return a11, a12, a21, a22


def det_quadratic_coefficients(gamma, omega0, R, W):
    """(A2, A1, A0) with det A_N = ystar**2 * (A2*N**2 + A1*N + A0).

    Valid on the seed variety, i.e. once (R, W) solve the first-order
    system.  A positivity check of this quadratic at N = 2 together with its
    leading coefficient is what guarantees the cascade never degenerates.
    """
    g, o = gamma, omega0
    K = g ** 3 - 2 * g * g + 2 * g * o * o - 2 * g * o - g - 6 * o * o + 2 * o + 2
    A2 = ((g ** 3 + 5 * g * g * o - 2 * g * g + 2 * g * o * o - 14 * g * o
           - g - 6 * o * o + 9 * o + 2) * o * o * R
          + (g ** 3 - 2 * g * g + 2 * g * o * o - 12 * g * o
             - g - 6 * o * o + 16 * o + 2) * o * W
          - 4 * o ** 3 * (3 * g + 2 * o - 4))
    A1 = K * o * o * R + K * o * W - 2 * o ** 3 * (g + 4 * o - 1)
    A0 = K * o * o * R + K * o * W + K * o * (3 * g + 3 * o - 4)
    return A2, A1, A0


def _conv(a, b, n, ctx):
    return ctx.sum([a[j] * b[n - j] for j in range(n + 1)])


@dataclass
class SonicSeries:
    """Truncated sonic-point expansion with a trust radius.

    Coefficient lists are indexed by order in delta = y - ystar.  `radius`
    is the heuristic half-width on which the truncation error of the order-n
    series sits far below working precision; `growth` is the fitted
    geometric growth rate of the normalised coefficients behind it.
    """
    ystar: float
    gamma: float
    n: int
    branch: int
    omega0: float
    rho0: float
    R: float
    W: float
    rho: list = field(repr=False)
    omega: list = field(repr=False)
    P: list = field(repr=False)
    growth: float = 0.0
    radius: float = 0.0

    def _horner(self, coeffs, delta):
        acc = coeffs[self.n] * (delta * 0 + 1)
        for k in range(self.n - 1, -1, -1):
            acc = acc * delta + coeffs[k]
        return acc

    def _horner_deriv(self, coeffs, delta):
        acc = self.n * coeffs[self.n] * (delta * 0 + 1)
        for k in range(self.n - 1, 0, -1):
            acc = acc * delta + k * coeffs[k]
        return acc

    def rho_at(self, delta):
        return self._horner(self.rho, delta)

    def omega_at(self, delta):
        return self._horner(self.omega, delta)

    def drho_at(self, delta):
        return self._horner_deriv(self.rho, delta)

    def domega_at(self, delta):
        return self._horner_deriv(self.omega, delta)

    def u_at(self, delta):
        return model.velocity(self.ystar + delta, self.omega_at(delta), self.gamma)


def expand(ystar, gamma, n_max=60, branch=1, ctx=FLOAT_CTX,
           radius_window=20, radius_alpha=1.5, root_iters=80, root_newton=2):
    """Build the sonic-point series to order n_max.

    branch selects the first-order root: 1 (default) is the steep-density
    branch that admits a static far field, 2 the shallow one.  Raises
    ValueError when ystar falls outside the closed window on which a sonic
    value exists (at the endpoints the seed degenerates onto the far-field
    and uniform solutions respectively, but the cascade itself still runs).
    """
    g = gamma
    ys = ystar
    model.validate_gamma(float(g))
    y_f, y_F = model.window(float(g))
    if not (y_f <= float(ys) <= y_F):
        raise ValueError(
            f"ystar={float(ys):.12g} outside the sonic window "
            f"[{y_f:.12g}, {y_F:.12g}] for gamma={float(g):.12g}")

    o0 = omega0_root(ys, g, ctx, iters=root_iters, newton=root_newton)
    r0 = seed_density(o0, g, ctx)
    pair1, pair2 = seed_slopes(o0, g, ctx)
    R, W = pair1 if branch == 1 else pair2

    zero = g * 0
    q0 = ctx.power(r0, g - 1)
    fourpi = 4 * ctx.pi / (4 - 3 * g)
    c = (g - 1) * (2 - g)
    ys2 = ys * ys

    rho = [r0, r0 * R / ys]
    omega = [o0, W / ys]
    P = [q0, (g - 1) * q0 * R / ys]
    w2 = [o0 * o0, 2 * o0 * omega[1]]
    rw = [r0 * o0, r0 * omega[1] + rho[1] * o0]
    r2 = [r0 * r0, 2 * r0 * rho[1]]
    r2w = [r2[0] * o0, r2[0] * omega[1] + r2[1] * o0]
    rw2 = [r0 * w2[0], r0 * w2[1] + rho[1] * w2[0]]
    w3 = [o0 * w2[0], o0 * w2[1] + omega[1] * w2[0]]
    # E[0] is exactly zero at a sonic point; see module docstring
    E = [zero, g * P[1] - ys2 * w2[1] - 2 * ys * w2[0]]
    inv = [1, -1 / ys]
    D = [zero, E[1]]
    cnorm = [0.0, 0.0]

    for N in range(2, n_max + 1):
        rho.append(zero)
        omega.append(zero)
        w2.append(_conv(omega, omega, N, ctx))
        rw.append(_conv(rho, omega, N, ctx))
        r2.append(_conv(rho, rho, N, ctx))
        r2w.append(_conv(r2, omega, N, ctx))
        rw2.append(_conv(rho, w2, N, ctx))
        w3.append(_conv(omega, w2, N, ctx))
        P.append(ctx.sum([(k * g - N) * rho[k] * P[N - k]
                          for k in range(1, N + 1)]) / (N * r0))
        E.append(g * P[N] - ys2 * w2[N] - 2 * ys * w2[N - 1] - w2[N - 2])
        inv.append(inv[-1] * (-1 / ys))
        D.append(ctx.sum([inv[k] * E[N - k] for k in range(N + 1)]))

        rhs1 = (c * (ys * rho[N] + rho[N - 1])
                + (g - 1) * (ys * rw[N] + rw[N - 1])
                - fourpi * (ys * r2w[N] + r2w[N - 1])
                + 2 * (ys * rw2[N] + rw2[N - 1]))
        lhs1 = ctx.sum([(k + 1) * rho[k + 1] * E[N - k] for k in range(N)])
        F = rhs1 - lhs1

        rhs2 = ((4 - 3 * g) / ys * D[N]
                - 3 / ys * _conv(omega, D, N, ctx)
                - c * (ys * omega[N] + omega[N - 1])
                - (g - 1) * (ys * w2[N] + w2[N - 1])
                + fourpi * (ys * rw2[N] + rw2[N - 1])
                - 2 * (ys * w3[N] + w3[N - 1]))
        lhs2 = ctx.sum([(k + 1) * omega[k + 1] * E[N - k] for k in range(N)])
        G = rhs2 - lhs2

        a11, a12, a21, a22 = matrix_entries(N, ys, g, r0, o0, R, W)
        det = a11 * a22 - a12 * a21
        rN = (a22 * F - a12 * G) / det
        wN = (a11 * G - a21 * F) / det
        rho[N] = rN
        omega[N] = wN

        w2[N] = w2[N] + 2 * o0 * wN
        rw[N] = rw[N] + r0 * wN + o0 * rN
        r2[N] = r2[N] + 2 * r0 * rN
        r2w[N] = r2w[N] + 2 * r0 * o0 * rN + r2[0] * wN
        rw2[N] = rw2[N] + w2[0] * rN + 2 * r0 * o0 * wN
        w3[N] = w3[N] + 3 * w2[0] * wN
        P[N] = P[N] + (g - 1) * (q0 / r0) * rN
        E[N] = g * P[N] - ys2 * w2[N] - 2 * ys * w2[N - 1] - w2[N - 2]
        D[N] = ctx.sum([inv[k] * E[N - k] for k in range(N + 1)])
        cnorm.append(max(abs(float(rN / r0)), abs(float(wN / o0))))

    # low orders carry a near-degenerate exponent 1/(N - alpha) that can
    # blow the rate estimate up by orders of magnitude, so the fit window
    # never reaches below N = 6 even for short expansions
    lo = max(6, n_max - radius_window + 1)
    rates = [(N ** 3 * cnorm[N]) ** (1.0 / (N - radius_alpha))
             for N in range(lo, n_max + 1) if cnorm[N] > 0.0]
    growth = max(rates) if rates else 0.0
    radius = 0.45 * float(ys)
    if growth > 0.0:
        radius = min(0.5 / growth, radius)

    return SonicSeries(ystar=ys, gamma=g, n=n_max, branch=branch,
                       omega0=o0, rho0=r0, R=R, W=W,
                       rho=rho, omega=omega, P=P,
                       growth=growth, radius=radius)
