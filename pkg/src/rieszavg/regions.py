"""Geometry of the case decomposition of the upper half-sphere.

The half-sphere chart (theta, phi) in (0, pi/2) x [0, 2 pi) is split by
which factor of the integrand t^2 F(t w1) f(t w2) f(t w3) runs out of
support first, and, when an f factor does, by which linear piece of F
contains that support edge.  Every region is a theta interval crossed
with a set of phi arcs whose endpoints belong to the closed family
    { constant,  q*pi/2 +/- acos(k*cot theta),  q*pi/2 +/- asin(k*cot theta) }
with rational k.  Arc endpoints are stored symbolically so the rigorous
mode can enclose them.

The stored region table is the corrected tiling of the sphere: the part
of the split band whose theta range is [acot(3/4), acos(1/sqrt 3)]
belongs to the region family with the theta-dependent outer arc
acos(cot theta) (C4B'1/B'2), and the piece-boundary arcs use the
coefficient 4/3 (printed once as 3/4 and once as 4/3 in the source
tables; only 4/3 tiles).  The fourth "pure" band is empty: it would need
cot theta >= 3/4 and <= 1/sqrt 2 simultaneously; the region is kept in
the table, flagged empty, so the audit trail stays 1:1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from .intervals import PI, Interval, iacos, iasin, is_interval

__all__ = [
    "CaseId", "ArcEnd", "PhiArc", "ThetaBound", "CaseRegion",
    "case_region", "all_regions", "partition_regions", "region_D",
    "classify", "fold_phi", "locate", "regions_to_json",
    "SQRT2", "ACOS_1_SQRT3",
]

SQRT2 = math.sqrt(2.0)
ACOS_1_SQRT3 = math.acos(1.0 / math.sqrt(3.0))  # = acot(1/sqrt 2)


class CaseId(str, Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    C3A = "C3A"
    C3B = "C3B"
    C3C = "C3C"
    C3D = "C3D"
    C3E1 = "C3E1"
    C3E2 = "C3E2"
    C3F1 = "C3F1"
    C3F2 = "C3F2"
    C3G1 = "C3G1"
    C3G2 = "C3G2"
    C4A = "C4A'"
    C4B1 = "C4B'1"
    C4B2 = "C4B'2"

    @classmethod
    def parse(cls, text: str) -> "CaseId":
        t = text.strip().lower().replace("'", "").replace("_", "")
        for member in cls:
            if member.value.lower().replace("'", "") == t:
                return member
        raise ValueError(f"unknown case id: {text!r}")


@dataclass(frozen=True)
class ThetaBound:
    """A theta endpoint: r*pi, acot(k) or acot(k/sqrt2), or acos(1/sqrt3)."""

    kind: str                      # "pi_mult" | "acot" | "acos_inv_sqrt3"
    coeff: Fraction = Fraction(0)  # pi multiple, or the cot value's rational part
    over_sqrt2: bool = False

    def value(self) -> float:
        if self.kind == "pi_mult":
            return float(self.coeff) * math.pi
        if self.kind == "acos_inv_sqrt3":
            return ACOS_1_SQRT3
        c = float(self.coeff) / (SQRT2 if self.over_sqrt2 else 1.0)
        return math.atan2(1.0, c)

    def enclose(self) -> Interval:
        # libm trig is not correctly rounded; pad well beyond 1 ulp
        v = self.value()
        pad = 1e-14 * (abs(v) + 1.0)
        return Interval(v - pad, v + pad)

    def label(self) -> str:
        if self.kind == "pi_mult":
            return f"{self.coeff}*pi"
        if self.kind == "acos_inv_sqrt3":
            return "acos(1/sqrt(3))"
        s = f"{self.coeff}"
        return f"acot({s}/sqrt(2))" if self.over_sqrt2 else f"acot({s})"


def _pi(num, den) -> ThetaBound:
    return ThetaBound("pi_mult", Fraction(num, den))


def _acot(num, den, over_sqrt2=False) -> ThetaBound:
    return ThetaBound("acot", Fraction(num, den), over_sqrt2)


_ACOS13 = ThetaBound("acos_inv_sqrt3")


@dataclass(frozen=True)
class ArcEnd:
    """phi endpoint: quadrant*pi/2 + sign * fn(coeff * cot theta).

    kind "const" ignores theta and returns quadrant*pi/2 + sign*const
    (const itself a multiple of pi/4 stored as a Fraction of pi).
    """

    kind: str                      # "const" | "acos_cot" | "asin_cot"
    coeff: Fraction = Fraction(1)  # multiplies cot(theta), or pi for consts
    quadrant: int = 0
    sign: int = 1

    def value(self, theta: float) -> float:
        base = self.quadrant * math.pi / 2
        if self.kind == "const":
            return base + self.sign * float(self.coeff) * math.pi
        arg = float(self.coeff) / math.tan(theta)
        arg = min(1.0, max(-1.0, arg))
        fn = math.acos if self.kind == "acos_cot" else math.asin
        return base + self.sign * fn(arg)

    def enclose(self, theta: Interval) -> Interval:
        base = PI * (self.quadrant / 2.0)
        if self.kind == "const":
            return base + PI * (self.sign * float(self.coeff))
        # cot is decreasing on (0, pi/2); pad for libm rounding
        clo = 1.0 / math.tan(theta.hi)
        chi = 1.0 / math.tan(theta.lo)
        pad_lo = 1e-14 * (abs(clo) + 1.0)
        pad_hi = 1e-14 * (abs(chi) + 1.0)
        cot = Interval(clo - pad_lo, chi + pad_hi)
        arg = cot * float(self.coeff)
        fn = iacos if self.kind == "acos_cot" else iasin
        return base + fn(arg) * self.sign

    def label(self) -> str:
        prefix = f"{self.quadrant}*pi/2 + " if self.quadrant else ""
        sgn = "-" if self.sign < 0 else ""
        if self.kind == "const":
            return f"{prefix}{sgn}{self.coeff}*pi"
        fn = "acos" if self.kind == "acos_cot" else "asin"
        return f"{prefix}{sgn}{fn}({self.coeff}*cot(theta))"


@dataclass(frozen=True)
class PhiArc:
    lower: ArcEnd
    upper: ArcEnd

    def bounds(self, theta: float) -> tuple:
        return self.lower.value(theta), self.upper.value(theta)


def _const(frac_of_pi, quadrant=0) -> ArcEnd:
    f = Fraction(frac_of_pi)
    return ArcEnd("const", abs(f), quadrant, 1 if f >= 0 else -1)


def _acos_arc(coeff, sign=1, quadrant=0) -> ArcEnd:
    return ArcEnd("acos_cot", Fraction(coeff), quadrant, sign)


def _asin_arc(coeff, sign=1, quadrant=0) -> ArcEnd:
    return ArcEnd("asin_cot", Fraction(coeff), quadrant, sign)


def _wedge() -> tuple:
    return (PhiArc(_const(Fraction(-1, 4)), _const(Fraction(1, 4))),)


def _inner(coeff) -> tuple:
    return (PhiArc(_acos_arc(coeff, -1), _acos_arc(coeff, 1)),)


def _outer(coeff) -> tuple:
    return (PhiArc(_acos_arc(coeff), _const(Fraction(1, 4))),
            PhiArc(_const(Fraction(-1, 4)), _acos_arc(coeff, -1)))


@dataclass(frozen=True)
class CaseRegion:
    case_id: CaseId
    theta_lo: ThetaBound
    theta_hi: ThetaBound
    phi_arcs: tuple
    symmetry_factor: int
    # phi interval of the region folded into [0, pi/4] (None, None) = all;
    # used by the partition test.  "acos:<k>" endpoints mean
    # acos(k*cot(theta)).
    folded: tuple = (None, None)

    @property
    def empty(self) -> bool:
        return self.theta_lo.value() >= self.theta_hi.value()

    def theta_interval(self) -> tuple:
        return self.theta_lo.value(), self.theta_hi.value()

    def folded_phi_interval(self, theta: float) -> Optional[tuple]:
        if self.empty:
            return None
        lo, hi = self.folded

        def resolve(spec, default):
            if spec is None:
                return default
            k = float(spec)
            return math.acos(min(1.0, max(-1.0, k / math.tan(theta))))
        return resolve(lo, 0.0), resolve(hi, math.pi / 4)


_F43 = Fraction(4, 3)

_REGIONS = (
    CaseRegion(CaseId.CASE1, _pi(0, 1), _pi(1, 4),
               (PhiArc(_const(0), _const(2)),), 1),
    CaseRegion(CaseId.CASE2, _pi(1, 4), _ACOS13,
               (PhiArc(_acos_arc(1), _asin_arc(1)),), 4,
               folded=(Fraction(1), None)),
    CaseRegion(CaseId.C3A, _acot(1, 4, True), _pi(1, 2), _wedge(), 4),
    CaseRegion(CaseId.C3B, _acot(2, 4, True), _acot(1, 4), _wedge(), 4),
    CaseRegion(CaseId.C3C, _acot(3, 4, True), _acot(2, 4), _wedge(), 4),
    # the would-be fourth pure band: acot(4/(4 sqrt 2)) > acot(3/4), so the
    # interval is empty; kept for the audit trail.
    CaseRegion(CaseId.C3D, _ACOS13, _acot(3, 4), _wedge(), 4),
    CaseRegion(CaseId.C3E1, _acot(1, 4), _acot(1, 4, True),
               _inner(4), 4, folded=(None, Fraction(4))),
    CaseRegion(CaseId.C3E2, _acot(1, 4), _acot(1, 4, True),
               _outer(4), 4, folded=(Fraction(4), None)),
    CaseRegion(CaseId.C3F1, _acot(2, 4), _acot(2, 4, True),
               _inner(2), 4, folded=(None, Fraction(2))),
    CaseRegion(CaseId.C3F2, _acot(2, 4), _acot(2, 4, True),
               _outer(2), 4, folded=(Fraction(2), None)),
    CaseRegion(CaseId.C3G1, _ACOS13, _acot(3, 4, True),
               _inner(_F43), 4, folded=(None, _F43)),
    CaseRegion(CaseId.C3G2, _ACOS13, _acot(3, 4, True),
               _outer(_F43), 4, folded=(_F43, None)),
    CaseRegion(CaseId.C4A, _pi(1, 4), _acot(3, 4),
               _inner(1), 4, folded=(None, Fraction(1))),
    CaseRegion(CaseId.C4B1, _acot(3, 4), _ACOS13,
               (PhiArc(_acos_arc(_F43), _acos_arc(1)),
                PhiArc(_acos_arc(1, -1), _acos_arc(_F43, -1))), 4,
               folded=(_F43, Fraction(1))),
    CaseRegion(CaseId.C4B2, _acot(3, 4), _ACOS13,
               _inner(_F43), 4, folded=(None, _F43)),
)

_BY_ID = {r.case_id: r for r in _REGIONS}


def case_region(case_id) -> CaseRegion:
    if not isinstance(case_id, CaseId):
        case_id = CaseId.parse(str(case_id))
    return _BY_ID[case_id]


def all_regions() -> tuple:
    return _REGIONS


def partition_regions() -> tuple:
    """The regions that tile (0, pi/2) x [0, 2 pi) (empty ones dropped)."""
    return tuple(r for r in _REGIONS if not r.empty)


def region_D(theta: float) -> list:
    """The four arcs where omega_1 dominates, for theta in the Case-2 band."""
    lo, hi = math.pi / 4, ACOS_1_SQRT3
    if not lo - 1e-12 <= theta <= hi + 1e-12:
        raise ValueError("theta outside the Case-2 band")
    return [PhiArc(_acos_arc(1, quadrant=q), _asin_arc(1, quadrant=q))
            for q in range(4)]


def fold_phi(phi: float) -> float:
    """Fold phi into [0, pi/4] using the evenness/swap symmetries of f.

    The folded angle satisfies cos(fold) = max(|cos phi|, |sin phi|), so
    (|w2|, |w3|) at phi equals (sin th cos fold, sin th sin fold) up to
    the factor swap, which all integrands here are invariant under.
    """
    r = math.fmod(phi, math.pi / 2)
    if r < 0:
        r += math.pi / 2
    return min(r, math.pi / 2 - r)


def classify(theta: float, phi: float) -> tuple:
    """(dominant_axis, vanish_signature) for a chart point.

    dominant_axis is the argmax of |omega_i| (ties toward the smaller
    index).  When an f factor dies first (axis 2 or 3), the signature is
    the index k in 0..3 with 2/|omega_axis| in [k, k+1]/(2 omega_1); when
    F dies first (axis 1) the signature is 4.
    """
    if not 0.0 < theta < math.pi / 2:
        raise ValueError("theta must lie strictly inside (0, pi/2)")
    w1 = math.cos(theta)
    w2 = math.sin(theta) * math.cos(phi)
    w3 = math.sin(theta) * math.sin(phi)
    mags = (abs(w1), abs(w2), abs(w3))
    axis = max(range(3), key=lambda i: (mags[i], -i)) + 1
    if axis == 1:
        return 1, 4
    u = 2.0 / mags[axis - 1]
    if w1 == 0.0:
        return axis, 0
    k = int(u * 2.0 * w1)
    return axis, min(k, 3)


def locate(theta: float, phi: float, boundary_tol: float = 1e-9) -> list:
    """All partition regions containing (theta, phi); None near a boundary.

    Used by the partition property test: off a measure-zero boundary band
    exactly one region must contain each point.
    """
    fold = fold_phi(phi)
    hits = []
    for reg in partition_regions():
        tlo, thi = reg.theta_interval()
        if abs(theta - tlo) < boundary_tol or abs(theta - thi) < boundary_tol:
            return None
        if not tlo < theta < thi:
            continue
        flo, fhi = reg.folded_phi_interval(theta)
        if abs(fold - flo) < boundary_tol or abs(fold - fhi) < boundary_tol:
            return None
        if flo < fold < fhi:
            hits.append(reg.case_id)
    return hits


def regions_to_json() -> str:
    """The region table as JSON (expressions plus decimal values)."""
    out = []
    for r in _REGIONS:
        out.append({
            "case_id": r.case_id.value,
            "theta": {
                "lo": {"expr": r.theta_lo.label(), "value": r.theta_lo.value()},
                "hi": {"expr": r.theta_hi.label(), "value": r.theta_hi.value()},
            },
            "phi_arcs": [{"lo": a.lower.label(), "hi": a.upper.label()}
                         for a in r.phi_arcs],
            "symmetry_factor": r.symmetry_factor,
            "empty": r.empty,
        })
    return json.dumps(out, indent=2)
