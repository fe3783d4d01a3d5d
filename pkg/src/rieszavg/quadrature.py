"""Outer numerical integration engines.

Three independent paths over the case regions:

* :func:`adaptive_1d` / :func:`integrate_region`: adaptive Gauss-Kronrod
  7/15 with bisection of the worst interval, nested for the iterated
  (theta, phi) integrals (the inner level gets a quarter of the
  tolerance),
* :func:`mc_halfsphere`: Monte Carlo over the upper half-sphere with
  normalized-Gaussian sampling (deterministic for a fixed seed),
* :func:`interval_enclose_region`: uniform cells evaluated in interval
  arithmetic, producing a mathematically guaranteed enclosure.

Everything reduces deterministically, so a fixed configuration gives
bitwise-reproducible results.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .intervals import Interval, isin, icos
from .regions import CaseRegion

__all__ = [
    "QuadratureConfig", "IntegralEstimate",
    "adaptive_1d", "integrate_region", "mc_halfsphere",
    "interval_enclose_region", "halfsphere_area",
]


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_subdivisions: int = 400   # adaptive intervals; also the interval-mode
    mc_samples: int = 1_000_000   # cells per axis
    rng_seed: int = 20240613

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")

    def scaled(self, factor: float) -> "QuadratureConfig":
        return QuadratureConfig(self.abs_tol * factor, self.rel_tol * factor,
                                self.max_subdivisions, self.mc_samples,
                                self.rng_seed)


@dataclass
class IntegralEstimate:
    value: float
    error: float                 # abs error estimate / enclosure half-width
    evaluations: int = 0         # or MC standard error
    method: str = "adaptive"     # adaptive | interval | monte_carlo
    converged: bool = True
    enclosure: tuple = None      # (lo, hi) in interval mode

    def __post_init__(self):
        if self.error < 0:
            raise ValueError("error must be nonnegative")

    def __add__(self, other: "IntegralEstimate") -> "IntegralEstimate":
        enc = None
        if self.enclosure and other.enclosure:
            enc = (self.enclosure[0] + other.enclosure[0],
                   self.enclosure[1] + other.enclosure[1])
        return IntegralEstimate(self.value + other.value,
                                self.error + other.error,
                                self.evaluations + other.evaluations,
                                self.method,
                                self.converged and other.converged, enc)

    def scaled(self, k: float) -> "IntegralEstimate":
        enc = None
        if self.enclosure:
            lo, hi = self.enclosure[0] * k, self.enclosure[1] * k
            enc = (min(lo, hi), max(lo, hi))
        return IntegralEstimate(self.value * k, self.error * abs(k),
                                self.evaluations, self.method,
                                self.converged, enc)


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469])

_NODES = np.concatenate([-_XGK[:7], _XGK[::-1]])           # ascending, 15
_KW = np.concatenate([_WGK[:7], _WGK[::-1]])                # kronrod weights
_GW = np.zeros(15)
_GW[1:14:2] = np.concatenate([_WG[:3], _WG[::-1]])          # gauss-7 weights


def _gk15(f, a: float, b: float, vectorized: bool):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid + half * _NODES
    if vectorized:
        y = np.asarray(f(x), dtype=float)
    else:
        y = np.array([f(v) for v in x], dtype=float)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise ValueError(f"integrand returned a non-finite value at {bad!r}")
    k = half * float(np.dot(_KW, y))
    g = half * float(np.dot(_GW, y))
    return k, abs(k - g)


def adaptive_1d(f, a: float, b: float, cfg: QuadratureConfig,
                vectorized: bool = False) -> IntegralEstimate:
    """Adaptive GK7/15 with bisection of the largest-error interval."""
    if a > b:
        raise ValueError("integration bounds out of order")
    if a == b:
        return IntegralEstimate(0.0, 0.0, 0, "adaptive")
    k, e = _gk15(f, a, b, vectorized)
    heap = [(-e, 0, a, b, k, e)]
    counter = 1
    evals = 15
    total = k
    total_err = e
    while (total_err > max(cfg.abs_tol, cfg.rel_tol * abs(total))
           and len(heap) < cfg.max_subdivisions):
        _, _, ia, ib, ik, ie = heapq.heappop(heap)
        total -= ik
        total_err -= ie
        im = 0.5 * (ia + ib)
        for ja, jb in ((ia, im), (im, ib)):
            jk, je = _gk15(f, ja, jb, vectorized)
            evals += 15
            total += jk
            total_err += je
            heapq.heappush(heap, (-je, counter, ja, jb, jk, je))
            counter += 1
    converged = total_err <= max(cfg.abs_tol, cfg.rel_tol * abs(total))
    return IntegralEstimate(total, total_err, evals, "adaptive", converged)


def integrate_region(region: CaseRegion, inner, cfg: QuadratureConfig
                     ) -> IntegralEstimate:
    """symmetry_factor * iint sin(th) cos(th) inner(th, phi) dphi dth.

    ``inner(theta, phi_array) -> array`` must vectorize over phi.  The
    phi level runs at a quarter of the requested tolerance.
    """
    if region.empty:
        return IntegralEstimate(0.0, 0.0, 0, "adaptive")
    t_lo, t_hi = region.theta_interval()
    inner_cfg = cfg.scaled(0.25)
    side = {"err": 0.0, "evals": 0, "converged": True}

    def outer(theta: float) -> float:
        total = 0.0
        for arc in region.phi_arcs:
            p_lo, p_hi = arc.bounds(theta)
            if p_hi <= p_lo:
                continue
            est = adaptive_1d(lambda p: inner(theta, p), p_lo, p_hi,
                              inner_cfg, vectorized=True)
            side["err"] = max(side["err"], est.error)
            side["evals"] += est.evaluations
            side["converged"] = side["converged"] and est.converged
            total += est.value
        return math.sin(theta) * math.cos(theta) * total

    est = adaptive_1d(outer, t_lo, t_hi, cfg)
    err = est.error + side["err"] * (t_hi - t_lo) * 0.5
    return IntegralEstimate(est.value * region.symmetry_factor,
                            err * region.symmetry_factor,
                            est.evaluations + side["evals"], "adaptive",
                            est.converged and side["converged"])


def halfsphere_area(n: int) -> float:
    """Surface measure of S^{n-1} restricted to omega_1 > 0."""
    return math.pi ** (n / 2) / math.gamma(n / 2)


def mc_halfsphere(integrand, n: int, cfg: QuadratureConfig
                  ) -> IntegralEstimate:
    """Monte Carlo of ``integrand`` over the half-sphere omega_1 > 0.

    Uniform points from normalized Gaussians with the first coordinate
    folded positive; ``integrand`` maps an (N, n) array to N values.
    The estimate is area * mean with its standard error.
    """
    if cfg.mc_samples < 2:
        raise ValueError("need at least two Monte Carlo samples")
    rng = np.random.default_rng(cfg.rng_seed)
    area = halfsphere_area(n)
    remaining = cfg.mc_samples
    total = 0.0
    total_sq = 0.0
    while remaining:
        chunk = min(remaining, 1_000_000)
        g = rng.standard_normal((chunk, n))
        norms = np.sqrt(np.sum(g * g, axis=1))
        # a Gaussian sample is never the zero vector in practice
        omega = g / norms[:, None]
        omega[:, 0] = np.abs(omega[:, 0])
        vals = np.asarray(integrand(omega), dtype=float)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        remaining -= chunk
    mean = total / cfg.mc_samples
    var = max(total_sq / cfg.mc_samples - mean * mean, 0.0)
    stderr = area * math.sqrt(var / cfg.mc_samples)
    return IntegralEstimate(area * mean, stderr, cfg.mc_samples,
                            "monte_carlo")


def _cells(lo: float, hi: float, n: int) -> Interval:
    edges = np.linspace(lo, hi, n + 1)
    return Interval(edges[:-1], edges[1:])


def interval_enclose_region(region: CaseRegion, inner, cfg: QuadratureConfig
                            ) -> IntegralEstimate:
    """Guaranteed enclosure of the region integral by uniform subdivision.

    ``inner(theta_iv, phi_iv) -> Interval`` must accept Interval cells
    (broadcasting over a phi cell vector).  Cell contributions are
    integrand-enclosure times measure; arc-endpoint uncertainty enters
    through boundary strips whose contribution is hulled with zero.
    ``cfg.max_subdivisions`` is the per-axis cell count.
    """
    if region.empty:
        return IntegralEstimate(0.0, 0.0, 0, "interval",
                                enclosure=(0.0, 0.0))
    n = cfg.max_subdivisions
    lo_enc = region.theta_lo.enclose()
    hi_enc = region.theta_hi.enclose()
    total = Interval.point(0.0)
    evals = 0
    theta_edges = np.linspace(float(lo_enc.hi), float(hi_enc.lo), n + 1)
    for j in range(n):
        tcell = Interval(theta_edges[j], theta_edges[j + 1])
        weight = isin(tcell) * icos(tcell) * (theta_edges[j + 1]
                                              - theta_edges[j])
        for arc in region.phi_arcs:
            alo = arc.lower.enclose(tcell)
            ahi = arc.upper.enclose(tcell)
            if float(ahi.hi) <= float(alo.lo):
                continue
            inner_lo, inner_hi = float(alo.hi), float(ahi.lo)
            if inner_hi <= inner_lo:
                # arc thinner than its endpoint enclosures
                box = inner(tcell, alo.hull(ahi))
                width = Interval(0.0, max(float(ahi.hi) - float(alo.lo), 0.0))
                contrib = (box * width).hull(Interval.point(0.0))
                total = total + contrib * weight
                evals += 1
                continue
            cells = _cells(inner_lo, inner_hi, n)
            vals = inner(tcell, cells)
            dphi = (inner_hi - inner_lo) / n
            total = total + (vals.sum() * dphi) * weight
            evals += n
            # boundary strips [alo.lo, alo.hi] and [ahi.lo, ahi.hi]
            for strip in (alo, ahi):
                w = max(float(strip.hi) - float(strip.lo), 0.0)
                if w == 0.0:
                    continue
                box = inner(tcell, strip)
                contrib = (box * Interval(0.0, w)).hull(Interval.point(0.0))
                total = total + contrib * weight
                evals += 1
    # theta edge strips (true bounds live inside their enclosures)
    for strip, side in ((lo_enc, "lo"), (hi_enc, "hi")):
        w = max(float(strip.hi) - float(strip.lo), 0.0)
        if w == 0.0:
            continue
        tcell = Interval(float(strip.lo), float(strip.hi))
        weight = isin(tcell) * icos(tcell) * Interval(0.0, w)
        for arc in region.phi_arcs:
            alo = arc.lower.enclose(tcell)
            ahi = arc.upper.enclose(tcell)
            if float(ahi.hi) <= float(alo.lo):
                continue
            box = inner(tcell, alo.hull(ahi))
            span = max(float(ahi.hi) - float(alo.lo), 0.0)
            contrib = (box * Interval(0.0, span) * weight)
            total = total + contrib.hull(Interval.point(0.0))
            evals += 1
    total = total * region.symmetry_factor
    lo, hi = float(total.lo), float(total.hi)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return IntegralEstimate(mid, half, evals, "interval",
                            converged=half <= cfg.abs_tol,
                            enclosure=(lo, hi))
