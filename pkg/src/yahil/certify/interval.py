"""Outward-rounded interval arithmetic.

Every arithmetic operation rounds its lower endpoint toward -inf and its
upper endpoint toward +inf by one `math.nextafter` step after the IEEE
round-to-nearest computation.  A correctly rounded binary operation is off
by at most half an ulp, and one nextafter step moves by at least half an
ulp (exactly half at a downward binade boundary), so the widened result
always encloses the exact real value.  Integer powers are evaluated by
square-and-multiply with interval products, never by libm `pow`, which is
not guaranteed correctly rounded.

Intervals are immutable; binary operators accept int/float scalars and
promote them to degenerate intervals.  Scalars are taken at face value:
a literal like 0.1 denotes the double nearest decimal 0.1, so callers
that need a true rational constant should build it from interval division
(e.g. ``4 / (x * 0 + 3)`` for 4/3).
"""

from __future__ import annotations

import math


def _down(x):
    return math.nextafter(x, -math.inf)


def _up(x):
    return math.nextafter(x, math.inf)


class Interval:
    """Closed interval [lo, hi] with outward-rounded arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo = float(lo)
        hi = float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoint is NaN")
        if lo > hi:
            raise ValueError(f"inverted interval [{lo!r}, {hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        m = 0.5 * (self.lo + self.hi)
        if not math.isfinite(m):
            m = 0.5 * self.lo + 0.5 * self.hi
        return m

    def contains(self, x):
        return self.lo <= x <= self.hi

    def intersects(self, other):
        other = _coerce(other)
        return not (self.hi < other.lo or other.hi < self.lo)

    def widened(self, rel):
        """Pad both endpoints by `rel` times the magnitude scale."""
        mag = max(abs(self.lo), abs(self.hi), 1.0e-300)
        pad = rel * mag
        return Interval(self.lo - pad, self.hi + pad)

    # -- arithmetic ----------------------------------------------------

    def __neg__(self):
        # negation is exact, no widening
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Interval(_down(o.lo - self.hi), _up(o.hi - self.lo))

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        if any(math.isnan(c) for c in cands):
            raise ValueError("indeterminate product (0 * inf)")
        return Interval(_down(min(cands)), _up(max(cands)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("interval denominator contains zero")
        cands = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        if any(math.isnan(c) for c in cands):
            raise ValueError("indeterminate quotient")
        return Interval(_down(min(cands)), _up(max(cands)))

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        if n < 0:
            return (1.0 / self) ** (-n)
        if n == 0:
            return Interval(1.0, 1.0)
        # even powers fold the sign before squaring so the enclosure
        # stays tight around zero-straddling intervals
        base = self
        if n % 2 == 0:
            if self.hi <= 0.0:
                base = -self
            elif self.lo < 0.0:
                m = max(-self.lo, self.hi)
                sq = Interval(m) * Interval(m)
                return Interval(0.0, sq.hi) ** (n // 2) if n > 2 else Interval(0.0, sq.hi)
        acc = Interval(1.0, 1.0)
        p = base
        k = n
        while k:
            if k & 1:
                acc = acc * p
            k >>= 1
            if k:
                p = p * p
        return acc

    def sqrt(self):
        if self.lo < 0.0:
            raise ValueError(f"sqrt of interval reaching below zero: {self!r}")
        lo = _down(math.sqrt(self.lo))
        if lo < 0.0:
            lo = 0.0
        return Interval(lo, _up(math.sqrt(self.hi)))


def _coerce(x):
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return Interval(float(x))
    return NotImplemented
