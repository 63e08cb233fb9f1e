"""Equilibrium stability classification on the reduced centre dynamics.

One-dimensional centres are classified from the parity and sign of the
lowest-degree nonzero term.  Two-dimensional centres are analysed in polar
coordinates ray by ray: on each sampled direction theta the radial velocity

    rdot = (x xdot + y ydot) / r,   x = r cos(theta), y = r sin(theta)

is collected as a univariate polynomial in r and its positive roots are the
radial fixed points of that ray.  The antisymmetric linear rotation cancels
from rdot exactly, so only the nonlinearity drives radial motion.

On rays where rdot vanishes identically (the loci the factor analysis of the
hand derivation singles out) the planar velocity is purely tangential; there
the along-ray speed r*thetadot is used instead, whose positive roots are
genuine planar equilibria.  Those rays are flagged ``tangential=True`` and
their sink/source labels follow the sign convention of the along-ray speed,
which reproduces the hand result rdot = r(r/sqrt(2) - lambda1) on the ray
theta = 7*pi/4 of the all-ones system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .manifold import ReducedSystem
from .poly import Polynomial

LEADING_TOL = 1e-10
ROOT_TOL = 1e-10
DEGENERATE_RAY_TOL = 1e-12
CLASSIFY_STEP = 1e-4


@dataclass(frozen=True)
class StabilityVerdict:
    kind: str                 # stable / unstable / inconclusive
    mechanism: str
    leading_degree: int
    leading_coefficient: float


@dataclass(frozen=True)
class RadialFixedPoint:
    r: float
    classification: str  # sink / source / degenerate


@dataclass(frozen=True)
class RayAnalysis:
    theta: float
    radial_poly: Polynomial            # univariate in r, the one analysed
    fixed_points: tuple[RadialFixedPoint, ...]
    tangential: bool                   # True when the along-ray fallback ran


@dataclass(frozen=True)
class RadialAnalysis:
    rays: tuple[RayAnalysis, ...]
    r_max: float
    theta_samples: int


def classify_1d(red: ReducedSystem) -> StabilityVerdict:
    """Sign analysis of the leading term of a one-dimensional reduced system.

    An even leading term fixes the sign of udot near the origin, which is
    the two-case instability mechanism of the worked example; odd leading
    terms behave like scalar odd flows.
    """
    if red.centre_dim != 1:
        raise ValueError(f"classify_1d needs a 1-D centre, got {red.centre_dim}")
    poly = red.field[0]
    leading = None
    for exps, coeff in sorted(poly.terms.items(), key=lambda kv: sum(kv[0])):
        if abs(coeff) > LEADING_TOL:
            leading = (sum(exps), coeff)
            break
    if leading is None:
        return StabilityVerdict("inconclusive", "zero-through-order", 0, 0.0)
    degree, coeff = leading
    if degree % 2 == 0:
        return StabilityVerdict("unstable", "even-leading-term", degree, coeff)
    if coeff < 0:
        return StabilityVerdict("stable", "odd-leading-negative", degree, coeff)
    return StabilityVerdict("unstable", "odd-leading-positive", degree, coeff)


def _require_planar_rotation(red: ReducedSystem):
    if red.centre_dim != 2:
        raise ValueError(f"polar analysis needs a 2-D centre, got {red.centre_dim}")
    A = red.centre_block
    if float(np.max(np.abs(A + A.T))) > 1e-9:
        raise ValueError("centre block is not antisymmetric (rotation form)")


def _collect(red: ReducedSystem, theta: float, weights: str) -> Polynomial:
    """Collect (x F1 + y F2)/r (weights="radial") or (x F2 - y F1)/r
    ("tangential") on the ray as a polynomial in r."""
    ct, st = math.cos(theta), math.sin(theta)
    coeffs: dict[int, float] = {}
    f1, f2 = red.field[0], red.field[1]
    for exps, coeff in f1.terms.items():
        i, j = exps
        k = i + j + 1
        if weights == "radial":
            coeffs[k] = coeffs.get(k, 0.0) + coeff * ct ** (i + 1) * st**j
        else:
            coeffs[k] = coeffs.get(k, 0.0) - coeff * ct**i * st ** (j + 1)
    for exps, coeff in f2.terms.items():
        i, j = exps
        k = i + j + 1
        if weights == "radial":
            coeffs[k] = coeffs.get(k, 0.0) + coeff * ct**i * st ** (j + 1)
        else:
            coeffs[k] = coeffs.get(k, 0.0) + coeff * ct ** (i + 1) * st**j
    return Polynomial(1, {(k - 1,): v for k, v in coeffs.items()})


def radial_dynamics(red: ReducedSystem, theta: float) -> Polynomial:
    """rdot on the ray ``theta`` as a univariate polynomial in r."""
    _require_planar_rotation(red)
    return _collect(red, theta, "radial")


def tangential_dynamics(red: ReducedSystem, theta: float) -> Polynomial:
    """r*thetadot on the ray ``theta`` as a univariate polynomial in r."""
    _require_planar_rotation(red)
    return _collect(red, theta, "tangential")


def angular_dynamics(red: ReducedSystem, r: float, theta: float) -> float:
    """thetadot = (x ydot - y xdot)/r^2 evaluated at (r, theta)."""
    _require_planar_rotation(red)
    if r <= 0:
        raise ValueError("angular velocity needs r > 0")
    poly = _collect(red, theta, "tangential")  # this is r*thetadot
    return sum(c * r ** (e[0] - 1) for e, c in poly.terms.items())


def _positive_roots(poly: Polynomial, r_max: float) -> list[float]:
    """Sign-bracketing scan over (0, r_max] refined by bisection."""
    val = poly.evaluate
    grid = 2048
    roots = []
    prev_r = r_max / grid * 0.5  # stay off r = 0, a root by construction
    prev_v = val([prev_r])
    for k in range(1, grid + 1):
        r = r_max * k / grid
        v = val([r])
        if v == 0.0:
            roots.append(r)
        elif prev_v * v < 0.0:
            lo, hi = prev_r, r
            flo = prev_v
            while hi - lo > ROOT_TOL:
                mid = 0.5 * (lo + hi)
                fm = val([mid])
                if fm == 0.0:
                    lo = hi = mid
                elif flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
        prev_r, prev_v = r, v
    return roots


def _classify_at(poly: Polynomial, r_star: float) -> str:
    step = min(CLASSIFY_STEP, r_star / 2) if r_star > 0 else CLASSIFY_STEP
    before = poly.evaluate([r_star - step]) if r_star > 0 else 0.0
    after = poly.evaluate([r_star + step])
    if r_star == 0.0:
        if after < 0.0:
            return "sink"
        if after > 0.0:
            return "source"
        return "degenerate"
    if before < 0.0 < after:
        return "source"
    if after < 0.0 < before:
        return "sink"
    return "degenerate"


def radial_fixed_points(red: ReducedSystem, theta_samples: int = 360,
                        r_max: float | None = None) -> RadialAnalysis:
    """Per-ray radial fixed points of a 2-D reduced system.

    Every ray reports r = 0 (classified from the sign of the analysed
    velocity at small r > 0) plus any roots found in (0, r_max].
    """
    _require_planar_rotation(red)
    if theta_samples < 8:
        raise ValueError("need at least 8 ray samples")
    if r_max is None:
        eigs = np.linalg.eigvals(red.centre_block)
        r_max = 10.0 * (float(np.max(np.abs(eigs))) + 1.0)
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    rays = []
    for k in range(theta_samples):
        theta = 2.0 * math.pi * k / theta_samples
        poly = _collect(red, theta, "radial")
        tangential = False
        if poly.max_abs_coeff() <= DEGENERATE_RAY_TOL:
            # radially stationary ray: genuine equilibria sit where the
            # remaining (tangential) speed vanishes as well
            poly = _collect(red, theta, "tangential")
            tangential = True
        if poly.max_abs_coeff() <= DEGENERATE_RAY_TOL:
            points = [RadialFixedPoint(0.0, "degenerate")]
        else:
            points = [RadialFixedPoint(0.0, _classify_at(poly, 0.0))]
            for root in _positive_roots(poly, r_max):
                points.append(RadialFixedPoint(root, _classify_at(poly, root)))
        rays.append(RayAnalysis(theta, poly, tuple(points), tangential))
    return RadialAnalysis(tuple(rays), r_max, theta_samples)


def planar_verdict(analysis: RadialAnalysis, reduced: ReducedSystem
                   ) -> StabilityVerdict:
    """Aggregate per-ray origin classes into one verdict for a 2-D centre.

    Uniform per-ray behaviour gives a definite verdict; mixed rays are
    inconclusive, tagged with whether a sink/source pair (origin sink plus an
    outer source on the same ray) was seen anywhere.
    """
    origin = {ray.fixed_points[0].classification for ray in analysis.rays}
    pair_seen = any(
        ray.fixed_points[0].classification == "sink"
        and any(p.classification == "source" for p in ray.fixed_points[1:])
        for ray in analysis.rays
    )
    leading = None
    for poly in reduced.field:
        for exps, coeff in sorted(poly.terms.items(), key=lambda kv: sum(kv[0])):
            if sum(exps) >= 2 and abs(coeff) > LEADING_TOL:
                if leading is None or sum(exps) < leading[0]:
                    leading = (sum(exps), coeff)
                break
    degree, coeff = leading if leading else (0, 0.0)
    if origin == {"sink"}:
        return StabilityVerdict("stable", "radial-uniform-sink", degree, coeff)
    if origin == {"source"}:
        return StabilityVerdict("unstable", "radial-uniform-source", degree, coeff)
    mech = "radial-sink-source-pair" if pair_seen else "radial-mixed-rays"
    return StabilityVerdict("inconclusive", mech, degree, coeff)
