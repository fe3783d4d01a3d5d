"""Exact algebra of polynomials and compactly supported piecewise polynomials.

Coefficients are generic scalars: plain floats for the fast path, or
:class:`~rieszavg.intervals.Interval` for certified enclosures.  All the
1-D integrands handled by this package are piecewise polynomials whose
breakpoints are dyadic-rational multiples of reciprocal direction
components, so every definite integral here is evaluated exactly (up to
rounding) through power-rule antiderivatives; no quadrature is involved.

Conventions:
  * a polynomial is its coefficient sequence in ascending degree; the
    empty sequence is the zero polynomial,
  * a piecewise polynomial stores k+1 strictly increasing breakpoints and
    k segment polynomials in the *global* variable t, and evaluates to 0
    outside its support,
  * the zero piecewise polynomial is canonicalized as an empty breakpoint
    list.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Sequence

from .intervals import Interval, is_interval, midpoint, vmax, vmin

__all__ = [
    "Polynomial", "PiecewisePolynomial", "ZERO_PW",
    "poly_eval", "poly_mul", "poly_definite_integral",
    "pw_scale_arg", "pw_mul", "pw_mul_monomial", "pw_integral",
    "make_F0", "make_F", "make_f0", "make_f",
    "make_F_piece", "make_F13_tilde",
]

# relative merge tolerance for nearly coincident breakpoints (float mode
# only): t-breakpoints such as k/(2 cos th) and 2/(sin th cos ph) collide
# on case boundaries and would otherwise create sliver segments.
MERGE_RTOL = 1e-12


def _is_zero_scalar(c) -> bool:
    if is_interval(c):
        return bool((c.lo == 0).all() and (c.hi == 0).all())
    return c == 0


class Polynomial:
    """Univariate polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        coeffs = list(coeffs)
        while coeffs and _is_zero_scalar(coeffs[-1]):
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        if not self.coeffs:
            return 0.0 * t
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * t + c
        return acc + 0.0 * t  # force scalar/array shape of t

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    def scale(self, k) -> "Polynomial":
        return Polynomial([c * k for c in self.coeffs])

    def compose_affine(self, alpha, beta) -> "Polynomial":
        """p(alpha*t + beta) as a Polynomial in t."""
        acc = Polynomial()
        lin = Polynomial([beta, alpha])
        for c in reversed(self.coeffs):
            acc = acc * lin + Polynomial([c])
        return acc

    def antiderivative(self) -> "Polynomial":
        return Polynomial([0.0] + [c / (k + 1)
                                   for k, c in enumerate(self.coeffs)])

    def definite_integral(self, a, b):
        if midpoint(a) > midpoint(b):
            raise ValueError("integration bounds out of order")
        anti = self.antiderivative()
        return anti(b) - anti(a)


ZERO_POLY = Polynomial()


class PiecewisePolynomial:
    """Compactly supported piecewise polynomial; 0 outside the support."""

    __slots__ = ("breakpoints", "segments")

    def __init__(self, breakpoints: Sequence = (), segments: Sequence = ()):
        breakpoints = tuple(breakpoints)
        segments = tuple(segments)
        if breakpoints:
            if len(segments) != len(breakpoints) - 1:
                raise ValueError("need exactly one segment per gap")
            mids = [midpoint(b) for b in breakpoints]
            if any(x >= y for x, y in zip(mids, mids[1:])):
                raise ValueError("breakpoints must be strictly increasing")
        elif segments:
            raise ValueError("segments given without breakpoints")
        self.breakpoints = breakpoints
        self.segments = segments

    @property
    def is_zero(self) -> bool:
        return not self.breakpoints

    @property
    def support(self):
        if self.is_zero:
            return (0.0, 0.0)
        return (self.breakpoints[0], self.breakpoints[-1])

    def __repr__(self):
        return (f"PiecewisePolynomial(breakpoints={list(self.breakpoints)!r}, "
                f"segments={list(self.segments)!r})")

    def __call__(self, t):
        if self.is_zero:
            return 0.0
        mids = [midpoint(b) for b in self.breakpoints]
        tm = midpoint(t)
        if tm < mids[0] or tm > mids[-1]:
            return 0.0
        idx = min(bisect_right(mids, tm) - 1, len(self.segments) - 1)
        idx = max(idx, 0)
        return self.segments[idx](t)

    def __add__(self, other: "PiecewisePolynomial") -> "PiecewisePolynomial":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        pts = _merged_breakpoints(list(self.breakpoints)
                                  + list(other.breakpoints))
        segs = []
        for a, b in zip(pts, pts[1:]):
            m = 0.5 * (midpoint(a) + midpoint(b))
            segs.append(_segment_at(self, m) + _segment_at(other, m))
        return _coalesced(pts, segs)

    def scale_arg(self, a) -> "PiecewisePolynomial":
        """t -> p(a*t) for a > 0; support shrinks by 1/a."""
        if midpoint(a) <= 0:
            raise ValueError("scale factor must be positive")
        if self.is_zero:
            return self
        pts = [b / a for b in self.breakpoints]
        segs = [s.compose_affine(a, 0.0) for s in self.segments]
        return PiecewisePolynomial(pts, segs)

    def shift_arg(self, h) -> "PiecewisePolynomial":
        """t -> p(t + h); support translates by -h."""
        if self.is_zero:
            return self
        pts = [b - h for b in self.breakpoints]
        segs = [s.compose_affine(1.0, h) for s in self.segments]
        return PiecewisePolynomial(pts, segs)

    def mul_monomial(self, k: int) -> "PiecewisePolynomial":
        if k < 0:
            raise ValueError("monomial degree must be nonnegative")
        if self.is_zero or k == 0:
            return self
        mono = Polynomial([0.0] * k + [1.0])
        return PiecewisePolynomial(self.breakpoints,
                                   [s * mono for s in self.segments])

    def __mul__(self, other: "PiecewisePolynomial") -> "PiecewisePolynomial":
        if self.is_zero or other.is_zero:
            return ZERO_PW
        lo = vmax(self.breakpoints[0], other.breakpoints[0])
        hi = vmin(self.breakpoints[-1], other.breakpoints[-1])
        if midpoint(lo) >= midpoint(hi):
            return ZERO_PW
        pts = [b for b in list(self.breakpoints) + list(other.breakpoints)
               if midpoint(lo) < midpoint(b) < midpoint(hi)]
        pts = _merged_breakpoints([lo] + pts + [hi])
        segs = []
        for a, b in zip(pts, pts[1:]):
            m = 0.5 * (midpoint(a) + midpoint(b))
            segs.append(_segment_at(self, m) * _segment_at(other, m))
        return PiecewisePolynomial(pts, segs)

    def integral(self, a, b):
        """Exact definite integral over [a, b] clipped to the support."""
        if midpoint(a) > midpoint(b):
            raise ValueError("integration bounds out of order")
        if self.is_zero:
            return 0.0
        lo = vmax(a, self.breakpoints[0])
        hi = vmin(b, self.breakpoints[-1])
        if midpoint(lo) >= midpoint(hi):
            return 0.0
        total = 0.0
        for left, right, seg in zip(self.breakpoints, self.breakpoints[1:],
                                    self.segments):
            cl = vmax(left, lo)
            cr = vmin(right, hi)
            if midpoint(cl) >= midpoint(cr):
                continue
            anti = seg.antiderivative()
            total = total + (anti(cr) - anti(cl))
        return total


ZERO_PW = PiecewisePolynomial()


def _segment_at(p: PiecewisePolynomial, x: float) -> Polynomial:
    mids = [midpoint(b) for b in p.breakpoints]
    if not mids or x < mids[0] or x > mids[-1]:
        return ZERO_POLY
    idx = min(bisect_right(mids, x) - 1, len(p.segments) - 1)
    return p.segments[max(idx, 0)]


def _merged_breakpoints(pts: list) -> list:
    pts = sorted(pts, key=midpoint)
    interval_mode = any(is_interval(b) for b in pts)
    out = [pts[0]]
    for b in pts[1:]:
        prev = midpoint(out[-1])
        cur = midpoint(b)
        scale = max(abs(prev), abs(cur), 1.0)
        if not interval_mode and cur - prev <= MERGE_RTOL * scale:
            continue  # slivers merged in float mode only
        out.append(b)
    return out


def _coalesced(pts: list, segs: list) -> PiecewisePolynomial:
    """Drop leading/trailing zero segments, merge equal neighbours."""
    while segs and segs[0].is_zero:
        segs = segs[1:]
        pts = pts[1:]
    while segs and segs[-1].is_zero:
        segs = segs[:-1]
        pts = pts[:-1]
    if not segs:
        return ZERO_PW
    new_pts = [pts[0]]
    new_segs = []
    for i, s in enumerate(segs):
        if new_segs and s == new_segs[-1]:
            new_pts[-1] = pts[i + 1]
            continue
        new_segs.append(s)
        new_pts.append(pts[i + 1])
    return PiecewisePolynomial(new_pts, new_segs)


# -- spec-level operation aliases ------------------------------------------

def poly_eval(p: Polynomial, t):
    return p(t)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_definite_integral(p: Polynomial, a, b):
    return p.definite_integral(a, b)


def pw_scale_arg(p: PiecewisePolynomial, a) -> PiecewisePolynomial:
    return p.scale_arg(a)


def pw_mul(p: PiecewisePolynomial, q: PiecewisePolynomial) -> PiecewisePolynomial:
    return p * q


def pw_mul_monomial(p: PiecewisePolynomial, k: int) -> PiecewisePolynomial:
    return p.mul_monomial(k)


def pw_integral(p: PiecewisePolynomial, a, b):
    return p.integral(a, b)


# -- the kernel profiles ----------------------------------------------------
# All coefficients are dyadic rationals, hence exact in binary floats.

def make_F0() -> PiecewisePolynomial:
    """Odd bump: 1/2-|x+1/2| on [-1,0), -(1/2-|x-1/2|) on [0,1)."""
    return PiecewisePolynomial(
        (-1.0, -0.5, 0.0, 0.5, 1.0),
        (Polynomial((1.0, 1.0)),      # x + 1
         Polynomial((0.0, -1.0)),     # -x
         Polynomial((0.0, -1.0)),     # -x
         Polynomial((-1.0, 1.0))))    # x - 1


def make_f0() -> PiecewisePolynomial:
    """Unit hat 1 - |x| on [-1, 1]."""
    return PiecewisePolynomial(
        (-1.0, 0.0, 1.0),
        (Polynomial((1.0, 1.0)), Polynomial((1.0, -1.0))))


def make_F() -> PiecewisePolynomial:
    """The odd profile F0(x) - F0(x+1)/2 - F0(x-1)/2 in segment form.

    On x >= 0: -3/4 + (3/2)|x-1/2| for x <= 1, 1/4 - |x-3/2|/2 for
    1 <= x <= 2, zero beyond; extended oddly to x < 0.  The breakpoint 0
    is kept even though the two central segments share the slope -3/2.
    """
    return PiecewisePolynomial(
        (-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0),
        (Polynomial((-1.0, -0.5)),    # -(x+2)/2
         Polynomial((0.5, 0.5)),      # (x+1)/2
         Polynomial((1.5, 1.5)),      # 3(x+1)/2
         Polynomial((0.0, -1.5)),
         Polynomial((0.0, -1.5)),
         Polynomial((-1.5, 1.5)),     # 3(x-1)/2
         Polynomial((-0.5, 0.5)),     # (x-1)/2
         Polynomial((1.0, -0.5))))    # -(x-2)/2


def make_f() -> PiecewisePolynomial:
    """The even profile f0(x) + f0(x+1)/2 + f0(x-1)/2 = 1 - |x|/2 on [-2,2]."""
    return PiecewisePolynomial(
        (-2.0, 0.0, 2.0),
        (Polynomial((1.0, 0.5)), Polynomial((1.0, -0.5))))


# slope/intercept of F's four linear pieces on u >= 0, piece i on
# [(i-1)/2, i/2] in the profile variable u = t*omega1
F_PIECE_LINES = ((-1.5, 0.0), (1.5, -1.5), (0.5, -0.5), (-0.5, 1.0))


def make_F_piece(i: int, omega1) -> PiecewisePolynomial:
    """Piece i in {1..4} of F(t*omega1), supported on [(i-1),(i)]/(2*omega1)."""
    if i not in (1, 2, 3, 4):
        raise ValueError("piece index must be 1..4")
    if midpoint(omega1) <= 0:
        raise ValueError("omega1 must be positive")
    m, q = F_PIECE_LINES[i - 1]
    lo = (i - 1) / (2.0 * omega1)
    hi = i / (2.0 * omega1)
    return PiecewisePolynomial((lo, hi), (Polynomial((q, m * omega1)),))


def make_F13_tilde(omega1) -> Polynomial:
    """Linear extension (t*omega1 - 1)/2 of the third piece.

    Returned as a plain Polynomial: it has no compact support and must
    never be support-clipped when used in upper bounds.
    """
    if midpoint(omega1) <= 0:
        raise ValueError("omega1 must be positive")
    return Polynomial((-0.5, 0.5 * omega1))
