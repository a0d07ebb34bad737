"""Command-line front end.

Subcommands
-----------
certify   run the rigorous sign-certificate suite (optionally fuzzed)
expand    Taylor-expand the profile about a prescribed sonic point
solve     find the critical sonic point and export the global profile
plotdata  emit figure data: slope branches, the h=0 level set, and the
          closed-form branch curves of the isothermal limit
physical  map a solved profile to physical-space fields at a time t < 0

Exit codes: 0 success, 1 usage or configuration error (including gamma
outside (1, 4/3)), 2 verification failure (failed certificate, failed
invariant, shooting ambiguity, or a sonic point outside its window).

All numbers are printed with shortest round-trip formatting (repr), so
re-parsing a CSV reproduces the binary doubles exactly and identical
configurations produce byte-identical files.  Files are written to a
temporary sibling and renamed into place.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import certify, integrate, model, shoot, sonic
from .model import FOUR_THIRDS, ShootAmbiguity, VerificationError

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling sys.exit on bad usage."""

    def error(self, message):
        raise UsageError(message)


def _fmt(x):
    return repr(float(x))


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".yahil-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        _write_atomic(path, text)


def _csv_text(header, rows):
    lines = [header]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _check_gamma(gamma):
    if not 1.0 < gamma < FOUR_THIRDS:
        raise UsageError(f"gamma must lie strictly inside (1, 4/3); got {gamma!r}")


# -- certify ---------------------------------------------------------


def cmd_certify(args):
    try:
        results = certify.run_suite(threads=args.threads,
                                    tol_scale=args.tol_scale)
    except certify.Inconclusive as exc:
        print(f"certificate inconclusive: {exc}", file=sys.stderr)
        return 2
    print(certify.format_results(results))
    fuzz_report = None
    if args.fuzz > 0:
        fuzz_report = certify.fuzz_certificates(results, n_points=args.fuzz)
        print(f"fuzz: {fuzz_report['n_points']} points, "
              f"{fuzz_report['violations']} violations")
    consistency = certify.seed_consistency()
    worst = min(consistency["margins"].values())
    print(f"seed consistency: ok={consistency['ok']} worst margin {worst:.3e}")
    if args.out is not None:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "tol_scale": args.tol_scale,
            "all_verified": certify.suite_ok(results),
            "certificates": [
                {
                    "name": r.name,
                    "mode": r.mode,
                    "tol": r.tol,
                    "enclosure": list(r.enclosure),
                    "reference": list(r.ref) if r.ref is not None else None,
                    "verified": r.verified,
                    "sign_agrees": r.sign_agrees,
                    "reference_intersects": r.ref_intersects,
                }
                for r in results
            ],
            "seed_consistency": consistency,
        }
        if fuzz_report is not None:
            payload["fuzz"] = fuzz_report
        _emit(args.out, _json_text(payload))
    ok = certify.suite_ok(results) and consistency["ok"]
    if fuzz_report is not None:
        ok = ok and fuzz_report["violations"] == 0
    return 0 if ok else 2


# -- expand ----------------------------------------------------------


def _truncated(series, k):
    return sonic.SonicSeries(
        ystar=series.ystar, gamma=series.gamma, n=k, branch=series.branch,
        omega0=series.omega0, rho0=series.rho0, R=series.R, W=series.W,
        rho=series.rho[:k + 1], omega=series.omega[:k + 1],
        P=series.P[:k + 1], growth=series.growth, radius=series.radius)


def residual_slopes(series, k=8, n_pts=9):
    """Log-log slopes of the two field-equation residuals of a truncation.

    The order-k truncation satisfies the degenerate equations
    G*rho' = y*rho*h and G*omega' = (4-3g-3w)*G/y - y*w*h up to O(delta^(k+1)),
    so both slopes should come out near k+1.  A low order keeps the residual
    far above double-precision noise across the sampled range, which sits at
    a fixed fraction of ystar (clamped by the trust radius): much closer to
    the sonic point the true residual of a short truncation drops below the
    rounding floor of its own evaluation and the fit would read noise.
    """
    k = min(k, series.n)
    trunc = _truncated(series, k)
    g = series.gamma
    hi = 0.16 * series.ystar
    if series.radius > 0.0:
        hi = min(hi, 0.6 * series.radius)
    delta = hi * np.logspace(np.log10(0.25), 0.0, n_pts)
    y = series.ystar + delta
    rho = trunc.rho_at(delta)
    om = trunc.omega_at(delta)
    drho = trunc.drho_at(delta)
    dom = trunc.domega_at(delta)
    gap = model.speed_gap(y, rho, om, g)
    h = model.drift(rho, om, g)
    res1 = np.abs(gap * drho - y * rho * h)
    res2 = np.abs(gap * dom - ((4 - 3 * g - 3 * om) * gap / y - y * om * h))
    logd = np.log10(delta)
    s1 = np.polyfit(logd, np.log10(np.maximum(res1, 1e-300)), 1)[0]
    s2 = np.polyfit(logd, np.log10(np.maximum(res2, 1e-300)), 1)[0]
    return float(s1), float(s2), k


def cmd_expand(args):
    _check_gamma(args.gamma)
    try:
        series = sonic.expand(args.ystar, args.gamma, n_max=args.n,
                              branch=args.branch)
    except ValueError as exc:
        raise VerificationError(str(exc)) from exc
    if args.format == "csv":
        rows = [(str(n), _fmt(series.rho[n]), _fmt(series.omega[n]),
                 _fmt(series.P[n])) for n in range(series.n + 1)]
        _emit(args.out, _csv_text("n,rho,omega,P", rows))
        return 0
    s1, s2, k = residual_slopes(series)
    y_f, y_F = model.window(args.gamma)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "gamma": args.gamma,
        "ystar": args.ystar,
        "n": series.n,
        "branch": series.branch,
        "window": {"y_f": y_f, "y_F": y_F},
        "omega0": series.omega0,
        "rho0": series.rho0,
        "R": series.R,
        "W": series.W,
        "growth": series.growth,
        "radius": series.radius,
        "residual_slopes": {"rho_eq": s1, "omega_eq": s2, "order": k},
        "coefficients": {
            "rho": [float(c) for c in series.rho],
            "omega": [float(c) for c in series.omega],
            "P": [float(c) for c in series.P],
        },
    }
    _emit(args.out, _json_text(payload))
    return 0


# -- solve -----------------------------------------------------------


def _profile_csv(sol):
    rows = [
        (_fmt(sol.y[i]), _fmt(sol.rho[i]), _fmt(sol.omega[i]),
         _fmt(sol.u[i]), _fmt(sol.G[i]), _fmt(sol.h[i]))
        for i in range(sol.y.size)
    ]
    return _csv_text("y,rho,omega,u,G,h", rows)


def cmd_solve(args):
    _check_gamma(args.gamma)
    result = shoot.solve(args.gamma, n_max=args.n, rtol=args.rtol,
                         tol_factor=args.tol_factor,
                         handoff_tol=args.handoff_tol)
    sol = result.solution
    _emit(args.out, _profile_csv(sol))
    if args.summary is not None:
        y_f, y_F = model.window(args.gamma)
        bracket = result.bracket
        payload = {
            "schema_version": SCHEMA_VERSION,
            "gamma": args.gamma,
            "ystar": bracket.ystar,
            "bracket": {
                "lo": bracket.lo,
                "hi": bracket.hi,
                "width": bracket.width,
                "iterations": bracket.iterations,
            },
            "window": {"y_f": y_f, "y_F": y_F},
            "series": {
                "omega0": result.series.omega0,
                "rho0": result.series.rho0,
                "R": result.series.R,
                "W": result.series.W,
                "radius": result.series.radius,
                "growth": result.series.growth,
            },
            "fit": sol.fit,
            "handoff_discrepancy": {
                "left": sol.handoff_discrepancy[0],
                "right": sol.handoff_discrepancy[1],
            },
            "origin": {
                "y": float(sol.y[0]),
                "rho": float(sol.rho[0]),
                "omega": float(sol.omega[0]),
                "friedman_rho": 1.0 / (6.0 * np.pi),
                "friedman_omega": (4.0 - 3.0 * args.gamma) / 3.0,
            },
            "left_terminal": sol.left_terminal,
            "invariants": [
                {"name": inv.name, "passed": inv.passed,
                 "worst_value": inv.worst_value, "worst_y": inv.worst_y}
                for inv in result.invariants
            ],
        }
        _emit(args.summary, _json_text(payload))
    return 0


# -- plotdata --------------------------------------------------------


def _branch_table(gamma, n):
    """(omega0, R1, R2, W1, W2) across the admissible seed range."""
    o = np.linspace((4.0 - 3.0 * gamma) / 3.0, 2.0 - gamma, n)
    disc = sonic.slope_discriminant(o, gamma)
    rad2 = o ** 3 * disc
    scale = float(np.max(np.abs(rad2))) or 1.0
    rad2 = np.where((rad2 < 0) & (rad2 > -1e-9 * scale), 0.0, rad2)
    rad = np.sqrt(rad2)
    den = 2.0 * o ** 3 * (gamma + 1.0)
    r1 = ((9.0 - 7.0 * gamma) * o ** 2 - 8.0 * o ** 3 - rad) / den
    r2 = ((9.0 - 7.0 * gamma) * o ** 2 - 8.0 * o ** 3 + rad) / den
    w1 = 4.0 - 3.0 * gamma - 3.0 * o - o * r1
    w2 = 4.0 - 3.0 * gamma - 3.0 * o - o * r2
    return o, r1, r2, w1, w2


def cmd_plotdata(args):
    if args.table in ("branches", "f1"):
        if args.gamma is None:
            raise UsageError(f"--gamma is required for table {args.table!r}")
        _check_gamma(args.gamma)
    if args.table == "branches":
        o, r1, r2, w1, w2 = _branch_table(args.gamma, args.points)
        rows = [(_fmt(o[i]), _fmt(r1[i]), _fmt(r2[i]), _fmt(w1[i]),
                 _fmt(w2[i])) for i in range(o.size)]
        _emit(args.out, _csv_text("omega0,R1,R2,W1,W2", rows))
    elif args.table == "f1":
        lo = (4.0 - 3.0 * args.gamma) / 12.0
        o = np.linspace(lo, 2.0 - args.gamma, args.points)
        f1 = model.seed_density(o, args.gamma)
        rows = [(_fmt(o[i]), _fmt(f1[i])) for i in range(o.size)]
        _emit(args.out, _csv_text("omega,f1", rows))
    else:  # gamma1: closed-form branches of the isothermal limit
        o = np.linspace(1.0 / 3.0, 1.0, args.points)
        half = np.abs(1.0 - 2.0 * o)
        r1 = (1.0 - 4.0 * o - half) / (2.0 * o)
        r2 = (1.0 - 4.0 * o + half) / (2.0 * o)
        w1 = np.maximum(1.0 - 2.0 * o, 0.0)
        w2 = np.minimum(1.0 - 2.0 * o, 0.0)
        rows = [(_fmt(o[i]), _fmt(r1[i]), _fmt(r2[i]), _fmt(w1[i]),
                 _fmt(w2[i])) for i in range(o.size)]
        _emit(args.out, _csv_text("omega0,R1,R2,W1,W2", rows))
    return 0


# -- physical --------------------------------------------------------


def _read_profile(path):
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
    cols = header.split(",")
    if cols[:3] != ["y", "rho", "omega"]:
        raise UsageError(
            f"profile {path!r} must start with columns y,rho,omega; "
            f"found {header!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.ndim == 1:
        data = data[None, :]
    y, rho, omega = data[:, 0], data[:, 1], data[:, 2]
    if y.size < 4 or np.any(np.diff(y) <= 0):
        raise UsageError("profile grid must be strictly increasing, >= 4 rows")
    # seam-adjacent rows can be closer than one ulp of log(y); the
    # interpolation runs in log space, so thin to a strictly
    # log-increasing subsequence
    ly = np.log(y)
    run_max = np.maximum.accumulate(ly)
    keep = np.concatenate([[True], ly[1:] > run_max[:-1]])
    return y[keep], rho[keep], omega[keep]


def cmd_physical(args):
    _check_gamma(args.gamma)
    if not args.t < 0.0:
        raise UsageError(f"t must be negative (pre-collapse); got {args.t!r}")
    if not args.kappa > 0.0:
        raise UsageError(f"kappa must be positive; got {args.kappa!r}")
    from scipy.interpolate import PchipInterpolator

    y, rho, omega = _read_profile(args.profile)
    g = args.gamma
    sqrt_k = np.sqrt(args.kappa)
    mt = -args.t
    length = sqrt_k * mt ** (2.0 - g)

    if args.r_min is None:
        args.r_min = float(y[0] * length)
    if args.r_max is None:
        args.r_max = float(y[-1] * length)
    if not 0.0 < args.r_min < args.r_max:
        raise UsageError("need 0 < --r-min < --r-max")
    r = np.geomspace(args.r_min, args.r_max, args.n_r)
    yq = r / length

    # monotone cubic in log y: density additionally in log, so the
    # far-field power law interpolates as a near-straight line
    interp_rho = PchipInterpolator(np.log(y), np.log(rho), extrapolate=True)
    interp_om = PchipInterpolator(np.log(y), omega, extrapolate=True)
    rho_t = np.exp(interp_rho(np.log(yq)))
    om_t = interp_om(np.log(yq))
    extrapolated = (yq < y[0]) | (yq > y[-1])

    u_t = model.velocity(yq, om_t, g)
    rho_phys = mt ** -2.0 * rho_t
    u_phys = sqrt_k * mt ** (1.0 - g) * u_t
    m_phys = (4.0 * np.pi * args.kappa ** 1.5 * mt ** (4.0 - 3.0 * g)
              * model.local_mass(yq, rho_t, om_t, g))
    rows = [
        (_fmt(r[i]), _fmt(rho_phys[i]), _fmt(u_phys[i]), _fmt(m_phys[i]),
         str(int(extrapolated[i])))
        for i in range(r.size)
    ]
    _emit(args.out, _csv_text("r,rho_phys,u_phys,m_phys,extrapolated", rows))
    return 0


# -- parser ----------------------------------------------------------


def build_parser():
    parser = _Parser(prog="yahil",
                     description="Self-similar collapse profiles with a "
                                 "sonic point, plus rigorous sign "
                                 "certificates for the underlying analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="run the sign-certificate suite")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: YAHIL_THREADS or serial)")
    p.add_argument("--tol-scale", type=float, default=1.0,
                   help="multiply every certificate tolerance")
    p.add_argument("--fuzz", type=int, default=0, metavar="N",
                   help="also run N random containment checks")
    p.add_argument("--out", default=None, help="write JSON report here")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("expand", help="Taylor series about a sonic point")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--ystar", type=float, required=True)
    p.add_argument("--n", type=int, default=60, help="series order")
    p.add_argument("--branch", type=int, choices=(1, 2), default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("solve", help="critical sonic point + global profile")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--n", type=int, default=60, help="series order")
    p.add_argument("--rtol", type=float, default=1e-12,
                   help="integrator relative tolerance")
    p.add_argument("--tol-factor", type=float, default=1e-12,
                   help="bisection width target relative to the window")
    p.add_argument("--handoff-tol", type=float, default=1e-8)
    p.add_argument("--out", default=None, help="profile CSV (default stdout)")
    p.add_argument("--summary", default=None, help="JSON summary path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("plotdata", help="figure data tables")
    p.add_argument("--table", choices=("branches", "f1", "gamma1"),
                   required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("physical", help="physical-space fields at fixed t<0")
    p.add_argument("--profile", required=True, help="profile CSV from solve")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--t", type=float, required=True, help="time, t<0")
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--r-min", type=float, default=None)
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--n-r", type=int, default=200)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_physical)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ShootAmbiguity as exc:
        print(f"shooting ambiguity: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
