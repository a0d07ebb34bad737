"""Rigorous global bounds on box domains by interval branch-and-bound.

`bound_maximum` returns a two-sided enclosure [lo, hi] of the true
supremum of f over a rectangular box.  The lower side is certified by
interval point evaluations at box midpoints (a degenerate-interval
evaluation of f encloses the true value at that point, so its .lo is a
true function value lower bound).  The upper side is the largest interval
upper bound over the unexplored frontier.  Boxes whose interval bound
cannot exceed the certified lower bound are pruned; the rest are split
along their widest dimension until the gap closes to `tol`.

f takes a tuple with one entry per box dimension and must accept
`Interval` entries; scalars work too since the same expressions evaluate
pointwise (used for the midpoint probes via degenerate intervals).
"""

from __future__ import annotations

import heapq
import itertools
import math

from .interval import Interval


class Inconclusive(Exception):
    """Raised when the box budget is exhausted before the gap closes."""


def _split(box):
    widths = [b[1] - b[0] for b in box]
    j = widths.index(max(widths))
    lo, hi = box[j]
    m = 0.5 * (lo + hi)
    left = tuple(b if i != j else (lo, m) for i, b in enumerate(box))
    right = tuple(b if i != j else (m, hi) for i, b in enumerate(box))
    return left, right


def bound_maximum(f, box, tol, max_boxes=500_000):
    """Enclose sup f over the box; returns (lo, hi) with hi - lo <= tol.

    Raises Inconclusive if more than `max_boxes` subdivisions are needed,
    and ValueError if f is undefined somewhere in the box (e.g. an
    interval division hits a denominator straddling zero).
    """
    box = tuple((float(a), float(b)) for a, b in box)
    for a, b in box:
        if not (a < b) and not (a == b):
            raise ValueError(f"bad box side ({a!r}, {b!r})")

    counter = itertools.count()
    heap = []
    best_lo = -math.inf

    def push(bx):
        # a partial expression (sqrt or division) can be undefined on a
        # coarse box even though f is defined at every point of it; such
        # boxes get an unbounded score and are split before anything else
        nonlocal best_lo
        try:
            hi = f(tuple(Interval(a, b) for a, b in bx)).hi
        except (ValueError, ZeroDivisionError):
            hi = math.inf
        try:
            probe = f(tuple(Interval(0.5 * (a + b)) for a, b in bx))
        except (ValueError, ZeroDivisionError):
            probe = None
        if probe is not None and probe.lo > best_lo:
            best_lo = probe.lo
        if hi > best_lo:
            heapq.heappush(heap, (-hi, next(counter), bx))

    push(box)
    n_boxes = 1
    while heap:
        top_hi = -heap[0][0]
        if top_hi <= best_lo or top_hi - best_lo <= tol:
            break
        if n_boxes >= max_boxes:
            raise Inconclusive(
                f"gap {top_hi - best_lo:.3e} > tol {tol:.3e} after {n_boxes} boxes"
            )
        _, _, bx = heapq.heappop(heap)
        left, right = _split(bx)
        push(left)
        push(right)
        n_boxes += 2

    upper = best_lo if not heap else max(best_lo, -heap[0][0])
    return best_lo, upper


def bound_minimum(f, box, tol, max_boxes=500_000):
    """Enclose inf f over the box; returns (lo, hi) with hi - lo <= tol."""
    neg_lo, neg_hi = bound_maximum(lambda x: -f(x), box, tol, max_boxes)
    return -neg_hi, -neg_lo
