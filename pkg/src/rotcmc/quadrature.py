"""Numerical integration engines.

Two kinds of integrals show up in this problem: angle integrals with an
inverse-square-root singularity at both endpoints (handled by Chebyshev-Gauss
nodes, for which that weight is exact), and smooth cumulative angle integrals
(handled by adaptive Simpson bisection).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    NumericalError,
    PoleProximityError,
)

MAX_WEIGHTED_NODES = 2 ** 20
MAX_ADAPTIVE_DEPTH = 60
POLE_CLEARANCE = 1e-13


@dataclass(frozen=True)
class QuadResult:
    """Value of an integral plus an a-posteriori error estimate."""

    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0:
            raise DomainError("error_estimate must be nonnegative")
        if self.evaluations <= 0:
            raise DomainError("evaluations must be positive")


@dataclass(frozen=True)
class SingularInterval:
    """Endpoints x1 < x2 carrying the weight 1/sqrt((u-x1)(x2-u))."""

    x1: float
    x2: float

    def __post_init__(self):
        if not self.x1 < self.x2:
            raise DomainError(f"need x1 < x2, got [{self.x1}, {self.x2}]")


def _eval_nodes(f: Callable[[float], float], u: np.ndarray) -> np.ndarray:
    """Evaluate f on an array of nodes, falling back to a scalar loop."""
    try:
        y = np.asarray(f(u), dtype=float)
        if y.shape != u.shape:
            raise ValueError
    except (TypeError, ValueError):
        y = np.array([f(float(x)) for x in u], dtype=float)
    if not np.all(np.isfinite(y)):
        raise NumericalError("integrand returned NaN or infinity")
    return y


def chebyshev_gauss(f: Callable[[float], float], iv: SingularInterval,
                    n: int) -> float:
    """Fixed n-node Chebyshev-Gauss rule for int f(u)/sqrt((u-x1)(x2-u)) du.

    Exact for polynomial f of degree <= 2n-1; the substitution
    u = mid + half*cos(phi) absorbs both endpoint singularities.
    """
    if n < 2:
        raise DomainError("need at least 2 nodes")
    mid = 0.5 * (iv.x1 + iv.x2)
    half = 0.5 * (iv.x2 - iv.x1)
    j = np.arange(1, n + 1)
    u = mid + half * np.cos((2 * j - 1) * np.pi / (2 * n))
    return float(np.pi / n * np.sum(_eval_nodes(f, u)))


def integrate_chebyshev_weighted(f: Callable[[float], float],
                                 iv: SingularInterval,
                                 n: int = 32,
                                 tol: float = 1e-10) -> QuadResult:
    """Integrate f(u)/sqrt((u-x1)(x2-u)) over [x1, x2].

    Doubles the node count until two successive values agree to tol;
    the last successive difference is reported as the error estimate.
    """
    if n < 2:
        raise DomainError("need at least 2 starting nodes")
    evals = 0
    prev = None
    while n <= MAX_WEIGHTED_NODES:
        val = chebyshev_gauss(f, iv, n)
        evals += n
        if prev is not None:
            diff = abs(val - prev)
            if diff < tol:
                return QuadResult(val, diff, evals)
        prev = val
        n *= 2
    raise ConvergenceError(
        f"weighted quadrature did not reach tol={tol} within "
        f"{MAX_WEIGHTED_NODES} nodes")


def integrate_with_interior_pole_check(f: Callable[[float], float],
                                       iv: SingularInterval,
                                       pole: float,
                                       n: int = 32,
                                       tol: float = 1e-10) -> QuadResult:
    """Weighted integration guarded against a pole of f at `pole`.

    The pole must lie outside (x1, x2); if the interval comes within
    1e-13 of it the integrand cannot be resolved in double precision and
    a PoleProximityError is raised instead of returning garbage.
    """
    if iv.x1 < pole < iv.x2:
        raise DomainError(f"pole {pole} lies inside ({iv.x1}, {iv.x2})")
    clearance = max(iv.x1 - pole, pole - iv.x2)
    if clearance < POLE_CLEARANCE:
        raise PoleProximityError(
            f"interval endpoint within {clearance:.3e} of pole {pole}; "
            "too close to the discontinuity to evaluate")
    return integrate_chebyshev_weighted(f, iv, n=n, tol=tol)


def integrate_adaptive(f: Callable[[float], float], a: float, b: float,
                       tol: float = 1e-8) -> QuadResult:
    """Adaptive Simpson integration of a continuous f over [a, b].

    Classic interval-bisection scheme: each interval is accepted once the
    halved Simpson estimate agrees with the parent within 15x the local
    tolerance budget.  Raises on NaN/inf values and past depth 60.
    """
    if a == b:
        return QuadResult(0.0, 0.0, 1)
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    evals = 0

    def fe(x: float) -> float:
        nonlocal evals
        evals += 1
        y = f(x)
        if not math.isfinite(y):
            raise NumericalError(f"integrand not finite at x={x}")
        return y

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(lo: float, hi: float, flo: float, fmid: float, fhi: float,
                whole: float, budget: float, depth: int) -> tuple[float, float]:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:   # interval at float resolution
            return whole, 0.0
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = fe(lm)
        frm = fe(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        diff = left + right - whole
        if abs(diff) <= 15.0 * budget:
            return left + right + diff / 15.0, abs(diff) / 15.0
        if depth >= MAX_ADAPTIVE_DEPTH:
            raise ConvergenceError(
                f"adaptive quadrature exceeded depth {MAX_ADAPTIVE_DEPTH} "
                f"on [{lo}, {hi}]")
        lv, le = recurse(lo, mid, flo, flm, fmid, left, budget / 2.0, depth + 1)
        rv, re = recurse(mid, hi, fmid, frm, fhi, right, budget / 2.0, depth + 1)
        return lv + rv, le + re

    fa_, fb_ = fe(a), fe(b)
    fm_ = fe(0.5 * (a + b))
    whole = simpson(fa_, fm_, fb_, b - a)
    value, err = recurse(a, b, fa_, fm_, fb_, whole, tol, 0)
    return QuadResult(sign * value, err, evals)
