"""Outward-rounded interval arithmetic over numpy arrays.

An :class:`Interval` holds two float arrays ``lo <= hi`` (scalars are 0-d
arrays) and every operation rounds the endpoints outward with
``np.nextafter``, so the result is guaranteed to contain the exact value
for any point inputs drawn from the operand intervals.  This is the
"certified" realization of the scalar type used by the rest of the
package; plain floats / numpy arrays are the fast realization.

The dispatch helpers (:func:`vmin`, :func:`vmax`, :func:`vabs`,
:func:`midpoint`, ...) let the numeric kernels run unchanged on either
realization.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "Interval", "PI", "is_interval", "vmin", "vmax", "vabs", "midpoint",
    "half_width", "contains", "isin", "icos", "iacos", "iasin",
    "two_over_abs",
]

_INF = np.inf


def _down(x):
    return np.nextafter(x, -_INF)


def _up(x):
    return np.nextafter(x, _INF)


class Interval:
    """Closed interval [lo, hi] with outward-rounded arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = np.asarray(lo, dtype=float)
        hi = lo if hi is None else np.asarray(hi, dtype=float)
        lo, hi = np.broadcast_arrays(lo, hi)
        if np.any(lo > hi):
            raise ValueError("interval endpoints out of order")
        self.lo = np.array(lo, dtype=float)
        self.hi = np.array(hi, dtype=float)

    # -- constructors -------------------------------------------------
    @classmethod
    def point(cls, x):
        return cls(x, x)

    @classmethod
    def _raw(cls, lo, hi):
        out = object.__new__(cls)
        out.lo = np.asarray(lo, dtype=float)
        out.hi = np.asarray(hi, dtype=float)
        return out

    # -- basic queries ------------------------------------------------
    @property
    def mid(self):
        m = 0.5 * (self.lo + self.hi)
        return float(m) if m.ndim == 0 else m

    @property
    def width(self):
        w = self.hi - self.lo
        return float(w) if w.ndim == 0 else w

    @property
    def shape(self):
        return self.lo.shape

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((self.lo <= x) & (x <= self.hi)))

    def hull(self, other: "Interval") -> "Interval":
        return Interval._raw(np.minimum(self.lo, other.lo),
                             np.maximum(self.hi, other.hi))

    def sum(self):
        """Elementwise-array interval summed to a scalar interval."""
        return Interval._raw(_down(np.sum(self.lo)), _up(np.sum(self.hi)))

    def __repr__(self):
        if self.lo.ndim == 0:
            return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"
        return f"Interval(lo={self.lo!r}, hi={self.hi!r})"

    def __getitem__(self, idx):
        return Interval._raw(self.lo[idx], self.hi[idx])

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval._raw(_down(self.lo + other.lo),
                                 _up(self.hi + other.hi))
        other = np.asarray(other, dtype=float)
        return Interval._raw(_down(self.lo + other), _up(self.hi + other))

    __radd__ = __add__

    def __neg__(self):
        return Interval._raw(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Interval)
                       else -np.asarray(other, dtype=float))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Interval):
            p1 = self.lo * other.lo
            p2 = self.lo * other.hi
            p3 = self.hi * other.lo
            p4 = self.hi * other.hi
            lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
            hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
            return Interval._raw(_down(lo), _up(hi))
        other = np.asarray(other, dtype=float)
        p1 = self.lo * other
        p2 = self.hi * other
        return Interval._raw(_down(np.minimum(p1, p2)),
                             _up(np.maximum(p1, p2)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Interval):
            if np.any((other.lo <= 0) & (other.hi >= 0)):
                raise ZeroDivisionError("divisor interval contains zero")
            p1 = self.lo / other.lo
            p2 = self.lo / other.hi
            p3 = self.hi / other.lo
            p4 = self.hi / other.hi
            lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
            hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
            return Interval._raw(_down(lo), _up(hi))
        other = np.asarray(other, dtype=float)
        if np.any(other == 0):
            raise ZeroDivisionError("division by zero scalar")
        p1 = self.lo / other
        p2 = self.hi / other
        return Interval._raw(_down(np.minimum(p1, p2)),
                             _up(np.maximum(p1, p2)))

    def __rtruediv__(self, other):
        return Interval.point(other) / self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers supported")
        if n == 0:
            return Interval.point(np.ones_like(self.lo))
        if n % 2 == 0:
            a = vabs(self)
            lo = a.lo ** n
            hi = a.hi ** n
            return Interval._raw(_down(lo), _up(hi))
        return Interval._raw(_down(self.lo ** n), _up(self.hi ** n))

    def sqrt(self):
        if np.any(self.lo < 0):
            raise ValueError("sqrt of interval with negative lower bound")
        return Interval._raw(np.maximum(_down(np.sqrt(self.lo)), 0.0),
                             _up(np.sqrt(self.hi)))


# float enclosure of pi: math.pi < pi < nextafter(math.pi, inf)
PI = Interval(math.pi, np.nextafter(math.pi, 4.0))


def is_interval(x) -> bool:
    return isinstance(x, Interval)


def midpoint(x):
    return x.mid if is_interval(x) else x


def half_width(x):
    return 0.5 * x.width if is_interval(x) else 0.0


def contains(x, value) -> bool:
    """True value-containment test; exact equality for non-intervals."""
    if is_interval(x):
        return x.contains(value)
    return bool(np.all(np.asarray(x) == value))


def vmin(a, b):
    if is_interval(a) or is_interval(b):
        a = a if is_interval(a) else Interval.point(a)
        b = b if is_interval(b) else Interval.point(b)
        return Interval._raw(np.minimum(a.lo, b.lo), np.minimum(a.hi, b.hi))
    return np.minimum(a, b)


def vmax(a, b):
    if is_interval(a) or is_interval(b):
        a = a if is_interval(a) else Interval.point(a)
        b = b if is_interval(b) else Interval.point(b)
        return Interval._raw(np.maximum(a.lo, b.lo), np.maximum(a.hi, b.hi))
    return np.maximum(a, b)


def vabs(x):
    if is_interval(x):
        lo = np.where(x.lo > 0, x.lo, np.where(x.hi < 0, -x.hi, 0.0))
        hi = np.maximum(np.abs(x.lo), np.abs(x.hi))
        return Interval._raw(lo, hi)
    return np.abs(x)


def two_over_abs(w):
    """2 / |w|, mapping zero components to +inf (empty support clamp)."""
    a = vabs(w)
    if is_interval(a):
        with np.errstate(divide="ignore"):
            lo = np.where(a.hi > 0, _down(2.0 / a.hi), _INF)
            hi = np.where(a.lo > 0, _up(2.0 / a.lo), _INF)
        return Interval._raw(lo, hi)
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(a > 0, 2.0 / np.where(a > 0, a, 1.0), _INF)
    return out if out.ndim else float(out)


# -- trigonometry ---------------------------------------------------------
# Endpoint evaluation plus interior-extremum detection; a couple of ulps of
# outward padding covers libm error.

def _pad(lo, hi):
    return _down(_down(lo)), _up(_up(hi))


def isin(x: Interval) -> Interval:
    vlo, vhi = np.sin(x.lo), np.sin(x.hi)
    lo = np.minimum(vlo, vhi)
    hi = np.maximum(vlo, vhi)
    # maxima at pi/2 + 2k pi, minima at -pi/2 + 2k pi
    kmax = np.ceil((x.lo - math.pi / 2) / (2 * math.pi))
    has_max = (math.pi / 2 + 2 * math.pi * kmax) <= x.hi
    kmin = np.ceil((x.lo + math.pi / 2) / (2 * math.pi))
    has_min = (-math.pi / 2 + 2 * math.pi * kmin) <= x.hi
    hi = np.where(has_max, 1.0, hi)
    lo = np.where(has_min, -1.0, lo)
    lo, hi = _pad(lo, hi)
    return Interval._raw(np.maximum(lo, -1.0), np.minimum(hi, 1.0))


def icos(x: Interval) -> Interval:
    return isin(x + Interval._raw(np.float64(math.pi / 2),
                                  np.nextafter(math.pi / 2, 2.0)))


def iacos(x: Interval) -> Interval:
    xl = np.clip(x.lo, -1.0, 1.0)
    xh = np.clip(x.hi, -1.0, 1.0)
    lo, hi = _pad(np.arccos(xh), np.arccos(xl))
    return Interval._raw(np.maximum(lo, 0.0), np.minimum(hi, _up(math.pi)))


def iasin(x: Interval) -> Interval:
    xl = np.clip(x.lo, -1.0, 1.0)
    xh = np.clip(x.hi, -1.0, 1.0)
    lo, hi = _pad(np.arcsin(xl), np.arcsin(xh))
    return Interval._raw(lo, hi)
