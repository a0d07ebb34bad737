"""Selection of the critical sonic point by interval bisection.

Every ystar in the admissible window seeds a smooth local profile, but only
one extends to the origin with the right interior behaviour.  Inward runs
are graded by their first exit from the monotone regime: omega dipping to
the uniform value (4-3*gamma)/3 means ystar is too large; omega turning
around before getting there (usually followed by a singular collision with
the sonic surface) means ystar is too small; reaching the y floor quietly
happens at the lower window endpoint, where the profile is exactly the
static tail, and in a thin near-critical sliver.  First-crossing versus
everything else is monotone in ystar, so ~40 bisection steps on the window
pin the boundary to a relative width of 1e-12.  A non-monotone pattern of
observations aborts with ShootAmbiguity rather than guessing.

The uniform value repels inward trajectories like y**-3, so any residual
bracket offset is amplified by roughly (y_crossing/y)**3 below the
crossing.  The final assembly therefore deepens the bracket well past the
reported tolerance before seeding the inward run, and that run is allowed
to pass through the uniform value and continue to the floor; the amplified
offset at y_min then stays comfortably inside the origin tolerance.
"""

import math
from dataclasses import dataclass, field

from . import integrate, model, sonic
from .model import ShootAmbiguity, VerificationError


@dataclass
class Bracket:
    gamma: float
    lo: float
    hi: float
    ystar: float
    iterations: int
    history: list = field(repr=False)

    @property
    def width(self):
        return self.hi - self.lo


@dataclass
class SolveResult:
    bracket: Bracket
    series: sonic.SonicSeries
    left: integrate.Extension
    right: integrate.Extension
    hand_left: integrate.Handoff
    hand_right: integrate.Handoff
    solution: integrate.Solution
    invariants: list


def classify(ystar, gamma, n_max=60, rtol=1e-12, y_min=None):
    """Inward fate of the profile seeded at ystar.

    Returns (outcome, y_detail) with outcome 'crosses', 'turn', 'origin' or
    'sonic' and y_detail the terminal location; only 'crosses' counts as
    supercritical.  If the series value at the inward start point already
    sits at or below the uniform omega, the profile has crossed before
    integration even begins.
    """
    series = sonic.expand(ystar, gamma, n_max=n_max)
    wF = (4.0 - 3.0 * gamma) / 3.0
    d0 = -0.5 * series.radius
    if float(series.omega_at(d0)) <= wF:
        return "crosses", ystar + d0
    ext = integrate.extend_left(series, y_min=y_min, rtol=rtol)
    outcome = {"friedman_crossing": "crosses", "origin": "origin",
               "sonic_approach": "sonic", "omega_turn": "turn"}[ext.terminal]
    return outcome, ext.y_terminal


def critical_point(gamma, n_max=60, rtol=1e-12, tol_factor=1e-12):
    """Bisect the admissible window down to tol_factor of its width."""
    g = model.validate_gamma(gamma)
    y_f, y_F = model.window(g)
    history = []

    def crosses(ys):
        outcome, _ = classify(ys, g, n_max=n_max, rtol=rtol)
        history.append((ys, outcome))
        return outcome == "crosses"

    lo, hi = y_f, y_F
    if crosses(lo):
        raise ShootAmbiguity("lower window endpoint already crosses")
    if not crosses(hi):
        raise ShootAmbiguity("upper window endpoint fails to cross")
    tol = tol_factor * (y_F - y_f)
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if crosses(mid):
            hi = mid
        else:
            lo = mid
        iterations += 1

    seen = sorted(history)
    flags = [o == "crosses" for _, o in seen]
    if any(a and not b for a, b in zip(flags, flags[1:])):
        raise ShootAmbiguity("observations are not monotone across the window")
    return Bracket(gamma=g, lo=lo, hi=hi, ystar=0.5 * (lo + hi),
                   iterations=iterations, history=history)


def solve(gamma, n_max=60, rtol=1e-12, tol_factor=1e-12, handoff_tol=1e-8):
    """Critical profile end to end: bracket, extend, stitch, verify.

    Raises VerificationError if any extension monitor, handoff seam, or
    global invariant fails; the result carries all the diagnostics.
    """
    bracket = critical_point(gamma, n_max=n_max, rtol=rtol,
                             tol_factor=tol_factor)
    # deepen the bracket before seeding: the inward run amplifies the
    # residual offset like y**-3 below the uniform crossing, so the seed
    # must sit two to three orders closer to the boundary than the
    # reported width for the floor values to stay pinned
    lo, hi = bracket.lo, bracket.hi
    y_f, y_F = model.window(bracket.gamma)
    target = max(5e-3 * tol_factor * (y_F - y_f), 64.0 * math.ulp(hi))
    history = list(bracket.history)
    iterations = bracket.iterations
    while hi - lo > target:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        outcome, _ = classify(mid, bracket.gamma, n_max=n_max, rtol=rtol)
        history.append((mid, outcome))
        if outcome == "crosses":
            hi = mid
        else:
            lo = mid
        iterations += 1
    bracket = Bracket(gamma=bracket.gamma, lo=lo, hi=hi,
                      ystar=0.5 * (lo + hi), iterations=iterations,
                      history=history)
    series = sonic.expand(bracket.hi, bracket.gamma, n_max=n_max)
    left = integrate.extend_left(series, rtol=rtol, stop_at_uniform=False)
    right = integrate.extend_right(series, rtol=rtol)
    bad = [m.name for ext in (left, right) for m in ext.monitors if not m.passed]
    if bad:
        raise VerificationError(f"extension monitors failed: {', '.join(bad)}")
    hand_left = integrate.handoff(series, "left", rtol=rtol)
    hand_right = integrate.handoff(series, "right", rtol=rtol)
    worst = max(hand_left.discrepancy, hand_right.discrepancy)
    if worst > handoff_tol:
        raise VerificationError(
            f"handoff seam discrepancy {worst:.3e} exceeds {handoff_tol:.1e}")
    solution = integrate.assemble(series, left, right, hand_left, hand_right,
                                  rtol=rtol)
    invariants = integrate.verify_invariants(solution)
    failed = [i.name for i in invariants if not i.passed]
    if failed:
        raise VerificationError(f"invariants failed: {', '.join(failed)}")
    return SolveResult(bracket=bracket, series=series, left=left, right=right,
                       hand_left=hand_left, hand_right=hand_right,
                       solution=solution, invariants=invariants)
