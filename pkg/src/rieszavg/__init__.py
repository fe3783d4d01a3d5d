"""Verification engine for the half-sphere averaging integral.

Evaluates int_{S^2_+} <omega, e1> xi_3(omega) dsigma(omega) through exact
piecewise-polynomial inner integration, a case decomposition of the
half-sphere, and independent quadrature / Monte Carlo / interval oracles,
certifying that the integral is negative and reproducing the tabulated
per-case values and bounds.
"""

from .cases import (CaseResult, VerificationReport, decomposition_total,
                    evaluate_quantity, full_integral, total_report)
from .closedforms import verify_closed_form
from .intervals import Interval
from .piecewise import (PiecewisePolynomial, Polynomial, make_F, make_F0,
                        make_F13_tilde, make_F_piece, make_f, make_f0)
from .quadrature import (IntegralEstimate, QuadratureConfig, adaptive_1d,
                         integrate_region, interval_enclose_region,
                         mc_halfsphere)
from .regions import CaseId, CaseRegion, case_region, classify, region_D
from .xi import (Direction, SphericalAngle, S, angles_to_direction, g, h,
                 support_bound, xi3, xi_n)

__version__ = "0.1.0"

__all__ = [
    "CaseId", "CaseRegion", "CaseResult", "Direction", "IntegralEstimate",
    "Interval", "PiecewisePolynomial", "Polynomial", "QuadratureConfig",
    "S", "SphericalAngle", "VerificationReport", "adaptive_1d",
    "angles_to_direction", "case_region", "classify", "decomposition_total",
    "evaluate_quantity", "full_integral", "g", "h", "integrate_region",
    "interval_enclose_region", "make_F", "make_F0", "make_F13_tilde",
    "make_F_piece", "make_f", "make_f0", "mc_halfsphere", "region_D",
    "support_bound", "total_report", "verify_closed_form", "xi3", "xi_n",
]
