"""Rotation angle of one fundamental piece: K(H,C), the axis-case angle b(H),
their closed-form limits, and monotonicity diagnostics.

K is computed from the weighted-integral form

    K = int_{x1}^{x2} (H u + 1/C) / ((1-u) sqrt(u) sqrt(1+H^2)) *
        du / sqrt((u-x1)(x2-u)),

after two analytic reductions that keep the quadrature spectral on the whole
moduli space: the substitution u = v^2 absorbs the sqrt(u) factor (whose
branch point at 0 approaches x1 as C grows), and the simple pole at u = 1 is
subtracted and integrated in closed form (it approaches x2 both near the
axis hyperbola C = -1/H and, for H = 0, as C -> infinity).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ellipk

from .errors import (
    AxisError,
    DegenerateIntervalError,
    DomainError,
    StraddleError,
)
from .quadrature import (
    QuadResult,
    SingularInterval,
    integrate_chebyshev_weighted,
    integrate_with_interior_pole_check,
)
from .surface import SurfaceParams, c_min

SIDE_BELOW = "below_axis_C"
SIDE_ABOVE = "above_axis_C"
SIDE_AXIS = "axis"
SIDE_NA = "not_applicable"

# closer than this to C = -1/H, K is reported via its one-sided limits
AXIS_REFUSE_WINDOW = 1e-9


@dataclass(frozen=True)
class RotationAngle:
    """Signed angle in radians with an error estimate and a side tag."""

    value: float
    error_estimate: float
    side: str

    def __post_init__(self):
        if self.error_estimate < 0:
            raise DomainError("error_estimate must be nonnegative")
        if self.side not in (SIDE_BELOW, SIDE_ABOVE, SIDE_AXIS, SIDE_NA):
            raise DomainError(f"unknown side tag {self.side!r}")


@dataclass(frozen=True)
class Endpoints:
    """Roots x1 < x2 of the angle-integral weight; x2 = 1 only on the axis."""

    x1: float
    x2: float

    def __post_init__(self):
        if not (0.0 < self.x1 < self.x2 <= 1.0 + 1e-12):
            raise DomainError(f"endpoints out of order: {self.x1}, {self.x2}")


def _side_of(p: SurfaceParams) -> str:
    if p.H >= 0:
        return SIDE_NA
    return SIDE_BELOW if p.C < -1.0 / p.H else SIDE_ABOVE


def _sqrt_disc(H: float, C: float) -> float:
    hyp = math.hypot(1.0, H)
    disc = (C - c_min(H)) * (C - 2.0 * (H - hyp))
    return math.sqrt(max(disc, 0.0))


def endpoints(p: SurfaceParams) -> Endpoints:
    """Integration endpoints of the weighted angle integral.

    x2 uses the additive (stable) root formula; x1 comes from the product
    identity x1*x2 = 1/((1+H^2) C^2), which stays accurate for large C.
    """
    if p.is_isoparametric:
        raise DegenerateIntervalError(
            "endpoints coincide at the isoparametric boundary C = c_min(H)")
    H, C = p.H, p.C
    hyp2 = 1.0 + H * H
    s = _sqrt_disc(H, C)
    x2 = (C - 2.0 * H + s) / (2.0 * hyp2 * C)
    x1 = 1.0 / (hyp2 * C * C * x2)
    return Endpoints(x1=x1, x2=min(x2, 1.0))


def _one_minus_x2(p: SurfaceParams) -> float:
    """1 - x2 in cancellation-free form: 2(CH+1)^2 / (C (C+2H+2CH^2+s))."""
    H, C = p.H, p.C
    s = _sqrt_disc(H, C)
    return 2.0 * (C * H + 1.0) ** 2 / (C * (C + 2.0 * H + 2.0 * C * H * H + s))


def K(p: SurfaceParams, tol: float = 1e-10) -> RotationAngle:
    """Rotation angle of one fundamental piece.

    Signed: negative for H < 0 on the C > -1/H side.  Within 1e-9 of the
    axis hyperbola the quadrature cannot separate the pole from the
    endpoint, so the exact one-sided limit b(H) -/+ pi is returned with the
    matching side tag instead.
    """
    if p.is_isoparametric:
        raise DegenerateIntervalError(
            "K degenerates at C = c_min(H); use K_limit_cmin for the limit")
    if p.contains_axis:
        raise AxisError("K is undefined at C = -1/H; use b(H)")
    H, C = p.H, p.C
    if H < 0 and abs(C + 1.0 / H) < AXIS_REFUSE_WINDOW:
        left, right = K_one_sided_limits(H)
        rb = b(H, tol)
        if C < -1.0 / H:
            return RotationAngle(left, rb.error_estimate, SIDE_BELOW)
        return RotationAngle(right, rb.error_estimate, SIDE_ABOVE)

    a = 1.0 / C
    hyp = math.hypot(1.0, H)
    ep = endpoints(p)
    v1, v2 = math.sqrt(ep.x1), math.sqrt(ep.x2)
    one_m_v2 = _one_minus_x2(p) / (1.0 + v2)
    one_m_v1 = (1.0 - ep.x1) / (1.0 + v1)
    # residue factor of the pole at v = 1 after the u = v^2 substitution
    res = (H + a) / (hyp * math.sqrt((1.0 + v1) * (1.0 + v2)))

    def phi(v):
        return 2.0 * (H * v * v + a) / (
            (1.0 + v) * hyp * np.sqrt((v + v1) * (v2 + v)))

    def h_reg(v):
        return (phi(v) - res) / (1.0 - v)

    quad = integrate_with_interior_pole_check(
        h_reg, SingularInterval(v1, v2), pole=1.0, tol=tol)
    pole_term = res * math.pi / math.sqrt(one_m_v1 * one_m_v2)
    err = quad.error_estimate + abs(pole_term) * 1e-15
    return RotationAngle(quad.value + pole_term, err, _side_of(p))


def b(H: float, tol: float = 1e-10) -> RotationAngle:
    """Endpoint angle of the fundamental piece in the axis case C = -1/H.

    b(H) = int_0^1 -H / sqrt(v (1-v) (H^2+v)) dv, strictly decreasing from
    pi (H -> -inf) to 0 (H -> 0-).
    """
    if H >= 0:
        raise DomainError("b(H) is defined for H < 0 only")

    def f(v):
        return -H / np.sqrt(H * H + v)

    quad = integrate_chebyshev_weighted(f, SingularInterval(0.0, 1.0), tol=tol)
    return RotationAngle(quad.value, quad.error_estimate, SIDE_AXIS)


def K_one_sided_limits(H: float) -> tuple[float, float]:
    """(limit from C < -1/H, limit from C > -1/H) = (b(H)+pi, b(H)-pi)."""
    if H >= 0:
        raise DomainError("K has one-sided limits at -1/H only for H < 0")
    val = b(H).value
    return val + math.pi, val - math.pi


def K_limit_cmin(H: float) -> float:
    """Limit of K as C approaches the isoparametric boundary from above."""
    return math.pi * math.sqrt(2.0 - 4.0 * H / math.sqrt(4.0 + 4.0 * H * H))


def K_limit_inf(H: float) -> float:
    """Limit of K as C -> infinity: 2 arccot(H), with arccot in (0, pi/2)
    for H > 0 and in (-pi/2, 0) for H < 0 (value pi at H = 0)."""
    if H == 0:
        return math.pi
    return 2.0 * math.atan(1.0 / H)


def dK_dC(p: SurfaceParams, h: float | None = None) -> float:
    """Central finite difference of K in C; strictly negative on each side."""
    if h is None:
        h = max(1e-5, 1e-5 * abs(p.C))
    H, C = p.H, p.C
    if H < 0:
        ax = -1.0 / H
        if (C - h - ax) * (C + h - ax) < 0 or abs(C - ax) <= h:
            raise StraddleError(
                f"stencil [{C - h}, {C + h}] straddles the discontinuity "
                f"at C = {ax}")
    lo = K(SurfaceParams(H, C - h))
    hi = K(SurfaceParams(H, C + h))
    return (hi.value - lo.value) / (2.0 * h)


def b_elliptic_crosscheck(H: float) -> float:
    """b(H) through the complete elliptic integral of the first kind.

    Reducing the imaginary- and reciprocal-modulus transformations to real
    arguments gives b(H) = 2|H| / sqrt(1+H^2) * K_ell(1/(1+H^2)) (parameter
    convention m = k^2).  Independent of the quadrature path.
    """
    if H >= 0:
        raise DomainError("b(H) is defined for H < 0 only")
    hyp2 = 1.0 + H * H
    return 2.0 * abs(H) / math.sqrt(hyp2) * float(ellipk(1.0 / hyp2))
