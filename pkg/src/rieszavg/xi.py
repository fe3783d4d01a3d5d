"""The radial profile xi_n and its building blocks S_i, h_i, g_i.

xi_n(omega) = int_0^inf t^(n-1) F(t*omega_1) prod_{i>=2} f(t*omega_i) dt
for a unit vector omega.  The integrand is a compactly supported
piecewise polynomial in t, so everything here is exact piecewise
integration; the only approximations in this package live in the outer
spherical quadrature.

Two equivalent evaluation routes are provided:

* the piecewise-product route (`xi3`, `xi_n`) builds the integrand with
  the :mod:`~rieszavg.piecewise` algebra and integrates it; it is the
  reference implementation and works for any dimension,
* the clamped-antiderivative route (`xi3_many` and the `*_many` kernels)
  enumerates the four linear pieces of F analytically and clamps each to
  the f supports.  It is algebraically identical, vectorizes over numpy
  arrays, and accepts :class:`~rieszavg.intervals.Interval` scalars, which
  is what the rigorous mode uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .intervals import (Interval, is_interval, midpoint, two_over_abs, vabs,
                        vmax, vmin)
from .piecewise import (F_PIECE_LINES, ZERO_PW, PiecewisePolynomial,
                        make_F, make_F_piece, make_f, pw_integral, pw_mul,
                        pw_mul_monomial, pw_scale_arg)

__all__ = [
    "Direction", "SphericalAngle", "angles_to_direction", "support_bound",
    "S", "h", "g", "xi3", "xi_n",
    "xi3_many", "pieces_many", "line_pieces_many", "ftilde_many",
]

UNIT_NORM_TOL = 1e-12

_F = make_F()
_f = make_f()


@dataclass(frozen=True)
class Direction:
    """A point omega on the unit sphere S^{n-1}."""

    components: tuple

    def __init__(self, components: Sequence):
        components = tuple(components)
        if len(components) < 2:
            raise ValueError("a direction needs at least two components")
        norm2 = sum(c * c for c in components)
        if is_interval(norm2):
            if not norm2.contains(1.0):
                raise ValueError("interval direction does not enclose a "
                                 "unit vector")
        elif abs(norm2 - 1.0) > 64 * UNIT_NORM_TOL:
            raise ValueError(f"direction is not unit length: |w|^2={norm2!r}")
        object.__setattr__(self, "components", components)

    @property
    def dim(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


@dataclass(frozen=True)
class SphericalAngle:
    """Chart (theta, phi) of the upper half-sphere S^2_+.

    omega = (cos theta, sin theta cos phi, sin theta sin phi) with
    theta in [0, pi/2] (so omega_1 >= 0) and phi in [0, 2 pi).
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= midpoint(self.theta) <= math.pi / 2 + 1e-15:
            raise ValueError("theta must lie in [0, pi/2]")
        if not 0.0 <= midpoint(self.phi) < 2 * math.pi:
            raise ValueError("phi must lie in [0, 2*pi)")


def angles_to_direction(angle: SphericalAngle) -> Direction:
    th, ph = angle.theta, angle.phi
    return Direction((math.cos(th), math.sin(th) * math.cos(ph),
                      math.sin(th) * math.sin(ph)))


def support_bound(omega) -> float:
    """Smallest 2/|omega_i| over nonzero components.

    The integrand of xi_n vanishes identically beyond this value: the
    factor belonging to the largest |omega_i| is the first to reach the
    edge of its support.  Zero components contribute the constant factor
    f(0)=1 (or F(0)=0) and are skipped.
    """
    comps = list(omega)
    nz = [abs(c) for c in comps if c != 0]
    if not nz:
        raise ValueError("zero vector has no support bound")
    return 2.0 / max(nz)


def _f_factor_pw(w) -> PiecewisePolynomial:
    """f(t*w) as a piecewise polynomial of t; constant 1 for w = 0."""
    if w == 0:
        # huge single-segment constant; callers clip to the F support
        from .piecewise import Polynomial
        return PiecewisePolynomial((-1e30, 1e30), (Polynomial((1.0,)),))
    return pw_scale_arg(_f, abs(w))


def _check_angle(angle: SphericalAngle):
    c = math.cos(angle.theta)
    if c <= 0.0:
        raise ValueError("theta = pi/2 not allowed here: omega_1 = 0 makes "
                         "the F pieces undefined; use xi3 directly")
    return c, math.sin(angle.theta)


def S(i: int, a, angle: SphericalAngle):
    """S_i(a) = int_0^a t^2 F_piece_i(t) f(t*w2) f(t*w3) dt, exactly."""
    if i not in (1, 2, 3, 4):
        raise ValueError("piece index must be 1..4")
    if midpoint(a) < 0:
        raise ValueError("upper limit must be nonnegative")
    c, s = _check_angle(angle)
    w2 = s * math.cos(angle.phi)
    w3 = s * math.sin(angle.phi)
    integrand = pw_mul(pw_mul(make_F_piece(i, c), _f_factor_pw(w2)),
                       _f_factor_pw(w3))
    return pw_integral(pw_mul_monomial(integrand, 2), 0.0, a)


def h(i: int, angle: SphericalAngle):
    """Full contribution of F piece i: S_i between the piece endpoints."""
    c, _ = _check_angle(angle)
    return (S(i, i / (2.0 * c), angle) - S(i, (i - 1) / (2.0 * c), angle))


def g(i: int, angle: SphericalAngle):
    """S_i clipped at the f(t*w2) support edge 2/|w2|."""
    c, s = _check_angle(angle)
    w2 = s * math.cos(angle.phi)
    if w2 == 0:
        raise ValueError("g_i needs sin(theta)*cos(phi) != 0")
    upper = 2.0 / abs(w2)
    lowers = {1: 0.0, 2: 1 / (2.0 * c), 3: 2 / (2.0 * c), 4: 3 / (2.0 * c)}
    return S(i, upper, angle) - S(i, lowers[i], angle)


def xi3(omega) -> float:
    """xi_3 via the piecewise product, exact.

    omega_1 < 0 is folded through the oddness of F; omega_1 = 0 gives 0.
    """
    return xi_n(omega, 3)


def xi_n(omega, n: int) -> float:
    """Exact xi_n for any dimension n >= 2 (piecewise product route)."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    comps = list(omega)
    if len(comps) != n:
        raise ValueError("direction dimension does not match n")
    w1 = comps[0]
    if w1 == 0:
        return 0.0  # F(0) = 0 kills the integrand
    sign = 1.0 if w1 > 0 else -1.0
    prod = pw_scale_arg(_F, abs(w1))
    for w in comps[1:]:
        prod = pw_mul(prod, _f_factor_pw(w))
    if prod is ZERO_PW or prod.is_zero:
        return 0.0
    top = support_bound(omega)
    return sign * pw_integral(pw_mul_monomial(prod, n - 1), 0.0, top)


# -- clamped-antiderivative kernels (arrays or Interval scalars) ------------

def _cap_f(w2, w3):
    return vmin(two_over_abs(w2), two_over_abs(w3))


_W1_FLOOR = 1e-6  # below this the crude |xi| bound takes over (interval mode)


def _interval_where(cond, a: Interval, b: Interval) -> Interval:
    return Interval._raw(np.where(cond, a.lo, b.lo),
                         np.where(cond, a.hi, b.hi))


def _moment_anti(m, q, u):
    """(A0, A1, A2)(u): antiderivatives of u^{2+k} (m u + q), k = 0, 1, 2."""
    u3 = u ** 3
    u4 = u3 * u
    u5 = u4 * u
    u6 = u5 * u
    return (m * u4 * 0.25 + q * u3 * (1.0 / 3.0),
            m * u5 * 0.2 + q * u4 * 0.25,
            m * u6 * (1.0 / 6.0) + q * u5 * 0.2)


def _line_segment_integral(m, q, lo, hi, s_half, p_quarter):
    """int_lo^hi u^2 (m u + q)(1 - alpha u/2)(1 - beta u/2) du.

    Expanded in the symmetric functions s_half = (alpha+beta)/2 and
    p_quarter = alpha*beta/4, each of which then enters exactly once:
    this keeps interval dependency minimal, and a clamped-away segment
    (hi == lo) contributes an exact zero.
    """
    h0, h1, h2 = _moment_anti(m, q, hi)
    l0, l1, l2 = _moment_anti(m, q, lo)
    return (h0 - l0) - s_half * (h1 - l1) + p_quarter * (h2 - l2)


def pieces_many(w1, w2, w3, pieces=(0, 1, 2, 3), upper=None):
    """Sum over the requested F pieces of S_i(upper), support-clamped.

    Evaluated in the profile variable u = t*omega_1, where piece i spans
    the constant interval [i/2, (i+1)/2].  Works elementwise on numpy
    arrays or on Interval scalars/arrays (interval inputs must have
    w1 >= 0; array mode folds the sign of w1 through the oddness of F
    and masks w1 == 0 to zero).
    """
    interval_mode = any(is_interval(x) for x in (w1, w2, w3))
    if interval_mode:
        w1a = vabs(w1)
        w1f = Interval._raw(np.maximum(w1a.lo, _W1_FLOOR),
                            np.maximum(w1a.hi, _W1_FLOOR))
        guard = None
    else:
        w1 = np.asarray(w1, dtype=float)
        guard = np.abs(w1) > 0
        w1f = np.where(guard, np.abs(w1), 1.0)
    alpha = vabs(w2) / w1f
    beta = vabs(w3) / w1f
    s_half = (alpha + beta) * 0.5
    p_quarter = alpha * beta * 0.25
    cap = _cap_f(alpha, beta)
    if upper is not None:
        cap = vmin(cap, upper * w1f)
    total = 0.0
    for i in pieces:
        lo = 0.5 * i
        hi = vmax(lo, vmin(0.5 * (i + 1), cap))
        m, q = F_PIECE_LINES[i]
        total = total + _line_segment_integral(m, q, lo, hi, s_half,
                                               p_quarter)
    total = total / w1f ** 3
    if not interval_mode:
        return np.where(guard, np.sign(w1) * total, 0.0)
    if np.all(w1a.lo >= _W1_FLOOR):
        return total
    # near omega_1 = 0: |F(u)| <= (3/2) u gives |xi| <= (3/8) w1 cap_t^4
    cap_t = _cap_f(w2, w3)
    if upper is not None:
        cap_t = vmin(cap_t, upper)
    bound = 0.375 * w1a.hi * np.minimum(cap_t.hi, 4.0 / _W1_FLOOR) ** 4
    crude = Interval._raw(-bound, bound)
    return _interval_where(w1a.lo >= _W1_FLOOR, total, crude)


def xi3_many(w1, w2, w3):
    """Vectorized exact xi_3 (identical values to :func:`xi3`)."""
    return pieces_many(w1, w2, w3)


def line_pieces_many(w1, w2, w3):
    """Line-algebra evaluation h1+h2+h3+g4 without support clipping.

    Every F piece is integrated over its full span with the f factors
    kept as unclipped lines, and the fourth piece runs from its left
    endpoint to 2/|w2| as a directed integral.  This is the closed-form
    convention behind one of the tabulated values; it differs from xi_3
    wherever the f supports end inside a piece.  Requires w1 > 0 bounded
    away from zero.
    """
    w1a = vabs(w1)
    alpha = vabs(w2) / w1a
    beta = vabs(w3) / w1a
    s_half = (alpha + beta) * 0.5
    p_quarter = alpha * beta * 0.25
    total = 0.0
    for i in (0, 1, 2):
        m, q = F_PIECE_LINES[i]
        total = total + _line_segment_integral(m, q, 0.5 * i, 0.5 * (i + 1),
                                               s_half, p_quarter)
    m, q = F_PIECE_LINES[3]
    total = total + _line_segment_integral(m, q, 1.5, two_over_abs(alpha),
                                           s_half, p_quarter)
    return total / w1a ** 3


def ftilde_many(w1, w2, w3, with_f=True):
    """Directed int_{1/w1}^{2/|w2|} t^2 (t w1 - 1)/2 [f(t w2) f(t w3)] dt.

    The linear extension of the third F piece; with_f=True keeps the f
    factors (clipped at their supports), with_f=False drops them.  The
    integral is directed: the upper limit may fall below the lower one,
    in which case the (negative-range) orientation is kept.  Requires
    w1 > 0 bounded away from zero.
    """
    w1a = vabs(w1)
    alpha = vabs(w2) / w1a
    if with_f:
        beta = vabs(w3) / w1a
        hi = _cap_f(alpha, beta)
        s_half = (alpha + beta) * 0.5
        p_quarter = alpha * beta * 0.25
        # the extension is the line (u - 1)/2 in u = t*w1
        val = _line_segment_integral(0.5, -0.5, 1.0, hi, s_half, p_quarter)
        return val / w1a ** 3
    hi = two_over_abs(alpha)
    anti = lambda u: u ** 4 * 0.125 - u ** 3 / 6.0
    return (anti(hi) - anti(1.0)) / w1a ** 3


def xi_n_many(omega: np.ndarray) -> np.ndarray:
    """Vectorized exact xi_n for a batch of directions (N, n)."""
    omega = np.asarray(omega, dtype=float)
    n = omega.shape[1]
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if n == 3:
        return xi3_many(omega[:, 0], omega[:, 1], omega[:, 2])
    w1 = omega[:, 0]
    guard = np.abs(w1) > 0
    w1a = np.where(guard, np.abs(w1), 1.0)
    rest = np.abs(omega[:, 1:])
    with np.errstate(divide="ignore"):
        cap = np.min(np.where(rest > 0, 2.0 / np.where(rest > 0, rest, 1.0),
                              np.inf), axis=1)
    # product of the f lines: prod (1 - a_i t / 2), coefficients (N, n)
    fprod = np.zeros((omega.shape[0], n))
    fprod[:, 0] = 1.0
    for j in range(1, n):
        shifted = np.zeros_like(fprod)
        shifted[:, 1:] = fprod[:, :-1]
        fprod = fprod - 0.5 * rest[:, j - 1, None] * shifted
    total = np.zeros(omega.shape[0])
    half = 0.5 / w1a
    for i in range(4):
        m, q = F_PIECE_LINES[i]
        # t^(n-1) (m w1a t + q) fprod(t): degree n-1+1+(n-1) = 2n-1
        coeffs = np.zeros((omega.shape[0], 2 * n))
        coeffs[:, n - 1:2 * n - 1] += q * fprod
        coeffs[:, n:2 * n] += (m * w1a)[:, None] * fprod
        lo = np.minimum(i * half, cap)
        hi = np.maximum(lo, np.minimum((i + 1) * half, cap))
        powers = np.arange(1, 2 * n + 1)
        anti = coeffs / powers

        def val(t):
            acc = np.zeros_like(t)
            for k in range(2 * n - 1, -1, -1):
                acc = acc * t + anti[:, k]
            return acc * t
        total += val(hi) - val(lo)
    return np.where(guard, np.sign(w1) * total, 0.0)
