"""Sign certificates for the seed-branch analysis, re-verified rigorously.

Each certificate pins the sign of an auxiliary polynomial (or algebraic
expression) on a rectangular parameter box.  Together these signs carry
the structural facts the solver relies on: the slope discriminant stays
positive so both seed branches are real, the steep branch and the seed
root respond monotonically to the sonic position, and the order-N system
determinant never vanishes, so the expansion cascade is solvable to all
orders.

Boxes use the substitution v1 = omega0 + gamma, which maps the admissible
wedge ((4-3*gamma)/3 < omega0 < 2-gamma, 1 < gamma < 4/3) onto the
rectangle (4/3, 2) x (1, 4/3); certificate functions receive the tuple of
box coordinates and recover w = omega0 as v1 - gamma internally.  All
boxes are widened outward by one ulp per endpoint, so a verified sign on
the slightly larger box covers the exact rational domain.

Every certificate records a reference enclosure from an earlier
independent computation where one is available; agreement is checked on
the certified sign (mandatory) and on interval overlap (informational,
since the domains differ by the ulp padding and the tolerances differ).

`fuzz_certificates` replays random points through the same expressions in
plain float/ndarray arithmetic and checks containment in the interval
evaluations, guarding against a bug that would make the rigorous path and
the floating path compute different functions.
"""

from __future__ import annotations

import dataclasses
import functools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .interval import Interval, _down, _up
from .optimize import Inconclusive, bound_maximum, bound_minimum

MAX_BELOW_ZERO = "MaxBelowZero"
MIN_ABOVE_ZERO = "MinAboveZero"


def _sqrt(x):
    if isinstance(x, Interval):
        return x.sqrt()
    return np.sqrt(x)


def _three(x):
    # an exact-enough 3 built from the argument so the same source line
    # works for floats, ndarrays and intervals
    return x * 0 + 3


# -- expression library ----------------------------------------------
# Arguments are tuples of box coordinates.  Two-dimensional boxes carry
# (v1, gamma) with w = v1 - gamma; the three-dimensional box appends a
# convexity parameter k in (0, 1); one-dimensional boxes carry (gamma,).


def _disc(w, g):
    return (-4 * (4 - 3 * g) * (g + 1) * (g - 1) * (2 - g)
            + (57 - 114 * g + 73 * g ** 2 - 12 * g ** 3) * w
            - 8 * (14 - 15 * g + 3 * g ** 2) * w ** 2
            + 8 * (5 - 3 * g) * w ** 3)


def cert_s(x):
    """Slope discriminant itself."""
    v1, g = x
    return _disc(v1 - g, g)


def cert_sg(x):
    """Slope discriminant, gamma derivative at fixed w."""
    v1, g = x
    w = v1 - g
    return (-8 * (5 + 5 * g - 15 * g ** 2 + 6 * g ** 3)
            - (114 - 146 * g + 36 * g ** 2) * w
            - 8 * (-15 + 6 * g) * w ** 2
            - 24 * w ** 3)


def cert_sw(x):
    """Slope discriminant, w derivative."""
    v1, g = x
    w = v1 - g
    return ((57 - 114 * g + 73 * g ** 2 - 12 * g ** 3)
            - 16 * (14 - 15 * g + 3 * g ** 2) * w
            + 24 * (5 - 3 * g) * w ** 2)


def cert_quad10(x):
    v1, g = x
    w = v1 - g
    return (3 * (6 * g - 9) * w ** 2 + 2 * (6 * g ** 2 - 19 * g + 14) * w
            + 3 * g ** 3 - 18 * g ** 2 + 36 * g - 24)


def cert_quad11(x):
    v1, g = x
    w = v1 - g
    return (3 * (6 * g ** 2 + 8 * g - 24) * w ** 2
            + 2 * (6 * g ** 3 - 6 * g ** 2 - 28 * g + 32) * w
            + 3 * g ** 4 - 15 * g ** 3 + 18 * g ** 2 + 12 * g - 24)


def cert_g1(x):
    (g,) = x
    return 104 - 348 * g + 418 * g ** 2 - 183 * g ** 3 + 27 * g ** 4


def cert_g13(x):
    (g,) = x
    return 9 * g ** 4 - 60 * g ** 3 + 132 * g ** 2 - 104 * g + 24


def cert_g2(x):
    (g,) = x
    return (12 * (9 * g ** 4 - 60 * g ** 3 + 132 * g ** 2 - 104 * g + 24)
            + 4 * (2 - g) * (9 * g ** 3 - 42 * g ** 2 + 50 * g - 14))


def cert_l1(x):
    """Square of the linear slope combination minus w times the discriminant."""
    v1, g = x
    w = v1 - g
    lin = (11 - 5 * g) * w - 8 * w ** 2 + 2 * (g + 1) * (2 - g)
    return lin ** 2 - w * _disc(w, g)


def cert_dl1(x):
    v1, g = x
    w = v1 - g
    return 4 * (g + 1) * (24 * w ** 3 + 6 * (3 * g - 8) * w ** 2
                          + 2 * g * (3 * g - 7) * w
                          - (2 - g) * (-7 - 2 * g + 3 * g ** 2))


def cert_quad1(x):
    v1, g = x
    w = v1 - g
    return (-2 * (3 - g) * w ** 2 + (g - 1) * (5 * g - 9) * w
            - (g - 1) * (2 - g) * (g + 1))


def cert_quad2(x):
    v1, g = x
    w = v1 - g
    return (-10 * (3 - g) * w ** 2 + 2 * (g - 1) * (10 * g - 19) * w
            - 5 * (g - 1) * (2 - g) * (g + 1))


def cert_quad3(x):
    v1, g = x
    w = v1 - g
    return (10 * (7 - 3 * g) * w ** 2 - 2 * (15 * g ** 2 - 46 * g + 33) * w
            + 5 * (g - 1) * (2 - g) * (g + 1))


def cert_quad4(x):
    v1, g = x
    w = v1 - g
    return (-10 * (7 - g) * w ** 2 + 4 * (5 * g ** 2 - 17 * g + 13) * w
            - 5 * (g - 1) * (2 - g) * (g + 1))


def cert_quad5(x):
    v1, g = x
    w = v1 - g
    return (10 * (11 - 3 * g) * w ** 2 - 2 * (15 * g ** 2 - 51 * g + 40) * w
            + 5 * (g - 1) * (2 - g) * (g + 1))


def cert_quad6(x):
    v1, g = x
    w = v1 - g
    return (2 * (7 * g - 19) * w ** 2 + 2 * (g - 1) * (10 * g - 21) * w
            - 2 * (4 + 3 * g) * (g - 1) * (2 - g))


def cert_quad7(x):
    v1, g = x
    w = v1 - g
    return (-2 * (3 * g ** 2 - 2 * g - 13) * w ** 2
            - 2 * (g - 1) * (3 * g ** 2 - 5 * g - 3) * w
            + (g - 1) * (2 - g) * (3 * g ** 2 - 3 * g + 10))


def cert_quad8(x):
    v1, g = x
    w = v1 - g
    return (2 * (5 * g - 33) * w ** 2 + 2 * (10 * g ** 2 - 34 * g + 26) * w
            + 2 * (3 * g ** 3 - 7 * g ** 2 + 4))


def cert_quad9(x):
    v1, g = x
    w = v1 - g
    return ((-6 * g ** 2 + 8 * g + 54) * w ** 2
            + (-6 * g ** 3 + 16 * g ** 2 + 2 * g - 16) * w
            + 3 * (g - 1) * (2 - g) * (g ** 2 - g + 2))


def _wstar_radicand(g):
    return -87 + 10 * g + 129 * g ** 2 - 40 * g ** 3 - 8 * g ** 4


def cert_wstar_radicand(x):
    (g,) = x
    return _wstar_radicand(g)


def cert_wstar_gap(x):
    """Stationary w of the drift quadratic, measured against the seed floor."""
    (g,) = x
    wstar = (5 - 3 * g + _sqrt(_wstar_radicand(g))) / (4 * (7 + g))
    return wstar - (2 - g) / 3


def _q1plus(w, g):
    return (((2 * g - 3) * (3 * g - 4) * w ** 3) / ((2 - g) ** 2)
            + (-((g - 1) / (2 - g)) + ((4 - 3 * g) * (2 * g - 3)) / (2 - g)) * w ** 2
            + (-2 * (g - 1) - (g - 1) * (4 - 3 * g)) * w
            + (4 - 3 * g) * (2 - g) * (g - 1))


def cert_p1(x):
    v1, g = x
    return _q1plus(v1 - g, g)


def _dq1plus(w, g):
    a = (2 * g - 3) * (3 * g - 4) / ((2 - g) ** 2)
    b = -(g - 1) / (2 - g) + (4 - 3 * g) * (2 * g - 3) / (2 - g)
    c = -2 * (g - 1) - (g - 1) * (4 - 3 * g)
    return 3 * a * w ** 2 + 2 * b * w + c


def cert_p2(x):
    v1, g = x
    return _dq1plus(v1 - g, g)


def _dq1min(w, g):
    return ((3 * g - 6) - 2 * (6 * g - 7) * w / (2 - g)
            + 9 * (2 * g - 3) * w ** 2 / ((2 - g) ** 2))


def cert_p4(x):
    v1, g = x
    return _dq1min(v1 - g, g)


def _wcrit(g, n):
    return (2 - g) * (5 - 4 * g) / (14 - 7 * g - 4 * n)


def _mix(k, g):
    return ((g - 1) * k + (g - 1)) / (g + 1)


def cert_fun(x):
    g, k = x
    return _wcrit(g, _mix(k, g)) - 4 / _three(g) - 0.1 + g


def cert_fun2(x):
    g, k = x
    return 2 * _wcrit(g, _mix(k, g)) / _three(g) - 4 / _three(g) + g


def cert_fun3(x):
    g, k = x
    n = _mix(k, g)
    return 26 + 9 * g ** 2 - 8 * n + g * (-31 + 6 * n)


def _q6diffw(w, g, k):
    return (3 * w ** 2 * (k / (g + 1)) * ((g - 1) * k + 10 * g - 14) / ((2 - g) ** 2)
            + 2 * w * (k / (g + 1)) * (9 - 7 * g) / (2 - g))


def cert_p6diff(x):
    v1, g, k = x
    w = v1 - g
    return _dq1min(w, g) + _q6diffw(w, g, k)


def cert_g5(x):
    (g,) = x
    return -(21 * g ** 2 - 71 * g + 42)


def cert_g6(x):
    (g,) = x
    return 80 - 312 * g + 402 * g ** 2 - 183 * g ** 3 + 27 * g ** 4


def cert_g7(x):
    (g,) = x
    return 50 - 203 * g + 261 * g ** 2 - 120 * g ** 3 + 18 * g ** 4


def cert_g8(x):
    (g,) = x
    return (6 - 10 * g + 3 * g ** 2) * (16 - 30 * g + 9 * g ** 2)


def cert_g9(x):
    (g,) = x
    return -(3 * g ** 2 - 13 * g + 6)


def cert_g10(x):
    (g,) = x
    return 32 - 112 * g + 138 * g ** 2 - 61 * g ** 3 + 9 * g ** 4


def cert_g11(x):
    (g,) = x
    return 14 - 65 * g + 87 * g ** 2 - 40 * g ** 3 + 6 * g ** 4


def cert_g12(x):
    (g,) = x
    return 24 - 104 * g + 132 * g ** 2 - 60 * g ** 3 + 9 * g ** 4


# -- box catalogue ---------------------------------------------------

_T = 4.0 / 3.0


def _outer(box):
    """One-ulp outward widening so rational endpoints are always covered."""
    return tuple((_down(a), _up(b)) for a, b in box)


V = _outer(((_T, 2.0), (1.0, _T)))
V2 = _outer(((_T, 2.0), (1.02, 1.15)))
V3 = _outer(((_T, 1.8), (1.0, 1.02)))
V4 = _outer(((1.8, 2.0), (1.0, 1.02)))
V5 = _outer(((_T, 2.0), (1.15, _T)))
V6 = _outer(((1.42, 2.0), (1.0, _T)))
V7 = _outer(((_T, 1.42), (1.0, 1.1)))
V8 = _outer(((_T, 2.0), (1.1, _T)))
V9 = _outer(((_T, 1.8), (1.0, _T)))
V10 = _outer(((1.8, 2.0), (1.0, _T)))
VCRIT = _outer(((_T, _T + 0.1), (1.0, _T)))
GCRIT = _outer(((1.0, _T), (0.0, 1.0)))
BBOX = _outer(((_T, 2.0), (1.0, _T), (0.0, 1.0)))
G_LOW = _outer(((1.0, _T),))
G_HIGH = _outer(((_T, 2.0),))


@dataclasses.dataclass(frozen=True)
class CertSpec:
    name: str
    fn: object
    domain: tuple
    mode: str
    tol: float
    ref: tuple | None


_SPECS = (
    # slope discriminant: positive, increasing in w, increasing in gamma
    # where needed for branch reality and ordering
    CertSpec("sg", cert_sg, V6, MIN_ABOVE_ZERO, 1e-3, (1.06209, 1.26472)),
    CertSpec("s", cert_s, V7, MIN_ABOVE_ZERO, 1e-4, (0.0334093, 0.0431525)),
    CertSpec("sw", cert_sw, V8, MIN_ABOVE_ZERO, 1e-2, (0.336312, 2.0698)),
    CertSpec("quad10", cert_quad10, V, MAX_BELOW_ZERO, 1e-2, (-0.910166, -0.627474)),
    CertSpec("quad11", cert_quad11, V, MAX_BELOW_ZERO, 1e-2, (-2.12454, -1.63927)),
    CertSpec("g1", cert_g1, G_LOW, MIN_ABOVE_ZERO, 1e-3, (17.4556, 18.0143)),
    CertSpec("g13", cert_g13, G_LOW, MIN_ABOVE_ZERO, 1e-3, (0.827639, 1.00486)),
    CertSpec("g2", cert_g2, G_LOW, MIN_ABOVE_ZERO, 1e-3, (21.7206, 24.0462)),
    CertSpec("l1", cert_l1, V9, MIN_ABOVE_ZERO, 1e-2, (8.32454, 9.37091)),
    CertSpec("dl1", cert_dl1, V10, MAX_BELOW_ZERO, 1e-3, (-33.9807, -33.5971)),
    # monotone response of the seed root and steep slope to the sonic point
    CertSpec("quad1", cert_quad1, V, MAX_BELOW_ZERO, 1e-3, (-0.445382, -0.442693)),
    CertSpec("quad2", cert_quad2, V, MAX_BELOW_ZERO, 1e-3, (-2.22671, -2.21346)),
    CertSpec("quad3", cert_quad3, V, MIN_ABOVE_ZERO, 1e-3, (2.49842, 2.51321)),
    CertSpec("quad4", cert_quad4, V, MAX_BELOW_ZERO, 1e-3, (-2.56641, -2.55714)),
    CertSpec("quad5", cert_quad5, V, MIN_ABOVE_ZERO, 1e-3, (2.54864, 2.55882)),
    CertSpec("quad6", cert_quad6, V, MAX_BELOW_ZERO, 1e-3, (-2.67263, -2.65602)),
    CertSpec("quad7", cert_quad7, V, MIN_ABOVE_ZERO, 1e-3, (2.34889, 2.35904)),
    CertSpec("wstar_gap", cert_wstar_gap, G_LOW, MAX_BELOW_ZERO, 1e-3,
             (-0.0134389, -0.0127184)),
    CertSpec("quad8", cert_quad8, V, MAX_BELOW_ZERO, 1e-3, (-2.62435, -2.59568)),
    CertSpec("quad9", cert_quad9, V, MIN_ABOVE_ZERO, 1e-3, (1.5754, 1.58222)),
    # endpoint and near-marginal behaviour of the drift cubic
    CertSpec("p1_a", cert_p1, V2, MAX_BELOW_ZERO, 1e-4, (-0.0178999, -0.0177931)),
    CertSpec("p1_b", cert_p1, V3, MAX_BELOW_ZERO, 1e-3, (-0.0638237, -0.0622099)),
    CertSpec("p2_a", cert_p2, V5, MAX_BELOW_ZERO, 1e-2, (-0.321421, -0.231604)),
    CertSpec("p2_b", cert_p2, V4, MIN_ABOVE_ZERO, 1e-3, (0.178011, 0.190886)),
    CertSpec("p2_c", cert_p2, VCRIT, MAX_BELOW_ZERO, 1e-3, (-0.304395, -0.297167)),
    CertSpec("p4", cert_p4, V, MAX_BELOW_ZERO, 1e-3, (-2.003, -1.99999)),
    CertSpec("fun", cert_fun, GCRIT, MAX_BELOW_ZERO, 1e-3, (-0.154379, -0.153729)),
    CertSpec("fun2", cert_fun2, GCRIT, MAX_BELOW_ZERO, 1e-3, (-0.0363685, -0.0358193)),
    CertSpec("fun3", cert_fun3, GCRIT, MIN_ABOVE_ZERO, 1e-2, (0.483905, 0.681199)),
    CertSpec("p6diff", cert_p6diff, BBOX, MAX_BELOW_ZERO, 1e-2, (-2.03123, -1.99999)),
    CertSpec("g5", cert_g5, G_HIGH, MIN_ABOVE_ZERO, 1e-3, (15.2996, 15.3379)),
    CertSpec("g6", cert_g6, G_HIGH, MIN_ABOVE_ZERO, 1e-3, (29.4466, 30.2343)),
    CertSpec("g7", cert_g7, G_HIGH, MIN_ABOVE_ZERO, 1e-3, (14.8603, 15.7849)),
    CertSpec("g8", cert_g8, G_HIGH, MIN_ABOVE_ZERO, 1e-3, (15.9016, 16.0085)),
    CertSpec("g9", cert_g9, G_HIGH, MIN_ABOVE_ZERO, 1e-3, (5.99518, 6.00151)),
    CertSpec("g10", cert_g10, G_HIGH, MIN_ABOVE_ZERO, 1e-3, (11.5885, 11.8567)),
    CertSpec("g11", cert_g11, G_HIGH, MIN_ABOVE_ZERO, 1e-3, (5.98055, 6.15133)),
    CertSpec("g12", cert_g12, G_HIGH, MIN_ABOVE_ZERO, 1e-3, (5.96691, 6.22624)),
    # domain prerequisite: the wstar radicand stays positive, so the
    # square root above is defined on the whole gamma range
    CertSpec("wstar_radicand", cert_wstar_radicand, G_LOW, MIN_ABOVE_ZERO, 1e-3, None),
)

CERTIFICATES = {spec.name: spec for spec in _SPECS}


@dataclasses.dataclass(frozen=True)
class CertResult:
    name: str
    mode: str
    tol: float
    enclosure: tuple
    ref: tuple | None
    verified: bool
    sign_agrees: bool | None
    ref_intersects: bool | None
    seconds: float

    @property
    def ok(self):
        return self.verified and self.sign_agrees is not False


def run_certificate(name, max_boxes=500_000, tol_scale=1.0):
    spec = CERTIFICATES[name]
    tol = spec.tol * tol_scale
    t0 = time.perf_counter()
    if spec.mode == MAX_BELOW_ZERO:
        lo, hi = bound_maximum(spec.fn, spec.domain, tol, max_boxes)
        verified = hi < 0.0
        certified = hi
    else:
        lo, hi = bound_minimum(spec.fn, spec.domain, tol, max_boxes)
        verified = lo > 0.0
        certified = lo
    dt = time.perf_counter() - t0
    sign_agrees = None
    intersects = None
    if spec.ref is not None:
        ref_lo, ref_hi = spec.ref
        ref_certified = ref_hi if spec.mode == MAX_BELOW_ZERO else ref_lo
        sign_agrees = (certified < 0.0) == (ref_certified < 0.0)
        intersects = not (hi < ref_lo or ref_hi < lo)
    return CertResult(name, spec.mode, tol, (lo, hi), spec.ref,
                      verified, sign_agrees, intersects, dt)


def run_suite(names=None, threads=None, max_boxes=500_000, tol_scale=1.0):
    """Run certificates (all by default) and return results in catalogue order.

    `threads` > 1 fans certificates out over a process pool; the default
    reads YAHIL_THREADS from the environment and falls back to serial.
    """
    if names is None:
        names = list(CERTIFICATES)
    else:
        for n in names:
            if n not in CERTIFICATES:
                raise KeyError(f"unknown certificate {n!r}")
    if threads is None:
        threads = int(os.environ.get("YAHIL_THREADS", "1"))
    if threads > 1 and len(names) > 1:
        worker = functools.partial(run_certificate, max_boxes=max_boxes,
                                   tol_scale=tol_scale)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(worker, names))
    else:
        results = [run_certificate(n, max_boxes, tol_scale) for n in names]
    return results


def suite_ok(results):
    return all(r.ok for r in results)


def format_results(results):
    lines = []
    for r in results:
        lo, hi = r.enclosure
        status = "verified" if r.verified else "FAILED"
        agree = ""
        if r.sign_agrees is False:
            agree = "  SIGN MISMATCH"
            status = "FAILED"
        elif r.ref is not None:
            agree = "  ref ok" if r.ref_intersects else "  ref disjoint"
        lines.append(f"{r.name:16s} {r.mode:13s} [{lo: .9e}, {hi: .9e}]"
                     f"  {status}{agree}  ({r.seconds:.2f}s)")
    n_ok = sum(r.ok for r in results)
    lines.append(f"{n_ok}/{len(results)} certificates verified")
    return "\n".join(lines)


# -- floating-point cross-check --------------------------------------


def _box_range(fn, box, depth=14):
    """Interval range of fn over the box, splitting where it is undefined."""
    try:
        return fn(tuple(Interval(a, b) for a, b in box))
    except (ValueError, ZeroDivisionError):
        if depth == 0:
            raise
    widths = [b - a for a, b in box]
    j = widths.index(max(widths))
    a, b = box[j]
    m = 0.5 * (a + b)
    left = tuple(s if i != j else (a, m) for i, s in enumerate(box))
    right = tuple(s if i != j else (m, b) for i, s in enumerate(box))
    rl = _box_range(fn, left, depth - 1)
    rr = _box_range(fn, right, depth - 1)
    return Interval(min(rl.lo, rr.lo), max(rl.hi, rr.hi))


def fuzz_certificates(results=None, n_points=100_000, seed=20260822, rel=1e-13):
    """Random-point containment check of the interval evaluations.

    Draws points uniformly in every certificate's box, evaluates the same
    expression in ndarray arithmetic, and requires each value to lie in
    the whole-box interval evaluation (widened by `rel` relatively) and on
    the certified side of the branch-and-bound enclosure.  Returns a
    report dict; report["violations"] == 0 is the pass condition.
    """
    if results is None:
        results = run_suite()
    rmap = {r.name: r for r in results}
    rng = np.random.default_rng(seed)
    per = max(1, n_points // len(CERTIFICATES))
    report = {"n_points": 0, "violations": 0, "per_cert": {}}
    for name, spec in CERTIFICATES.items():
        box = spec.domain
        whole = _box_range(spec.fn, box).widened(rel)
        pts = tuple(rng.uniform(a, b, per) for a, b in box)
        vals = spec.fn(pts)
        bad_range = int(np.count_nonzero((vals < whole.lo) | (vals > whole.hi)))
        res = rmap.get(name)
        bad_side = 0
        if res is not None:
            lo, hi = res.enclosure
            scale = max(1.0, abs(lo), abs(hi))
            if spec.mode == MAX_BELOW_ZERO:
                bad_side = int(np.count_nonzero(vals > hi + rel * scale))
            else:
                bad_side = int(np.count_nonzero(vals < lo - rel * scale))
        report["per_cert"][name] = {"range": bad_range, "side": bad_side}
        report["n_points"] += per
        report["violations"] += bad_range + bad_side
    return report


# -- numerical companion on the actual seed data ---------------------


def seed_consistency(n_gamma=21, n_ystar=21):
    """Grid check that the certified signs hold on computed seed data.

    Sweeps gamma through the open admissibility range and the sonic point
    through the interior of its window, then checks the determinant
    quadratic (positive leading coefficient, positive value and slope at
    the first solved order) and the steep-branch slope bounds
    -4/((4-3g)(2-g)) < R1 < -1/(2-g), W1 > 0.  Returns a report with the
    worst margins; report["ok"] is the pass flag.
    """
    from .. import model, sonic

    margins = {
        "A2": math.inf,
        "detN2": math.inf,
        "detN2_slope": math.inf,
        "R1_lower": math.inf,
        "R1_upper": math.inf,
        "W1": math.inf,
    }
    gammas = np.linspace(1.0 + 1e-3, 4.0 / 3.0 - 1e-3, n_gamma)
    fracs = np.linspace(1e-3, 1.0 - 1e-3, n_ystar)
    for g in gammas:
        y_lo, y_hi = model.window(g)
        for f in fracs:
            ys = y_lo + f * (y_hi - y_lo)
            om0 = sonic.omega0_root(ys, g)
            (r1, w1), _ = sonic.seed_slopes(om0, g)
            a2, a1, a0 = sonic.det_quadratic_coefficients(g, om0, r1, w1)
            margins["A2"] = min(margins["A2"], a2)
            margins["detN2"] = min(margins["detN2"], 4 * a2 + 2 * a1 + a0)
            margins["detN2_slope"] = min(margins["detN2_slope"], 4 * a2 + a1)
            margins["R1_lower"] = min(
                margins["R1_lower"], r1 - (-4.0 / ((4 - 3 * g) * (2 - g))))
            margins["R1_upper"] = min(margins["R1_upper"], -1.0 / (2 - g) - r1)
            margins["W1"] = min(margins["W1"], w1)
    report = {"margins": margins, "n_gamma": int(n_gamma), "n_ystar": int(n_ystar)}
    report["ok"] = all(v > 0.0 for v in margins.values())
    return report
