"""Closed-form core of the rotational CMC surfaces in the unit 3-sphere.

Everything here derives from one scalar conservation law for the curvature
function g,

    g'(t)^2 + g(t)^2 * (1 + (H + g(t)^-2)^2) = C,

whose positive solutions exist exactly for C >= c_min(H) and are periodic
with period T = pi / sqrt(1 + H^2).  The planar profile curve beta (valid on
the whole parameter space, including the axis case C = -1/H) and the ambient
immersion phi are evaluated from g, g' and a cumulative angle integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal

import numpy as np

from .errors import DomainError, SingularityError
from .quadrature import integrate_adaptive

FLAG_REL_TOL = 1e-12      # relative tolerance for boundary-case flags
THETA_TOL = 1e-8          # default absolute tolerance for angle integrals
Which = Literal["alpha", "beta"]


def c_min(H: float) -> float:
    """Smallest conserved quantity C admitting a positive solution g."""
    return 2.0 * (H + math.hypot(1.0, H))


def period(H: float) -> float:
    """Period T of the curvature function g."""
    return math.pi / math.hypot(1.0, H)


@dataclass(frozen=True)
class SurfaceParams:
    """The pair (H, C) selecting one surface of the two-parameter family."""

    H: float
    C: float

    def __post_init__(self):
        if not (math.isfinite(self.H) and math.isfinite(self.C)):
            raise DomainError("H and C must be finite")
        lo = c_min(self.H)
        if self.C < lo and not self._near(self.C, lo):
            raise DomainError(
                f"C={self.C} below existence bound c_min({self.H})={lo}")

    @staticmethod
    def _near(a: float, b: float) -> bool:
        return abs(a - b) <= FLAG_REL_TOL * max(1.0, abs(a), abs(b))

    @property
    def c_min(self) -> float:
        return c_min(self.H)

    @property
    def period(self) -> float:
        return period(self.H)

    @property
    def is_isoparametric(self) -> bool:
        """Constant-g boundary case C = c_min(H) (Clifford-type torus)."""
        return self._near(self.C, self.c_min)

    @property
    def contains_axis(self) -> bool:
        """Profile passes through the origin: H < 0 and C = -1/H."""
        return self.H < 0 and self._near(self.C, -1.0 / self.H)


@dataclass(frozen=True)
class GState:
    """g and its derivative at one parameter value."""

    t: float
    g: float
    g_prime: float
    period: float


@dataclass(frozen=True)
class ProfilePoint:
    """Planar profile sample (t, x, y) with |(x, y)| < 1."""

    t: float
    x: float
    y: float


@dataclass(frozen=True)
class ProfilePolyline:
    """Ordered profile samples with strictly increasing parameter t."""

    points: tuple[ProfilePoint, ...]
    params: SurfaceParams

    def __post_init__(self):
        if not self.points:
            raise DomainError("polyline must be non-empty")
        ts = [pt.t for pt in self.points]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("polyline parameter must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    def t_values(self) -> np.ndarray:
        return np.array([pt.t for pt in self.points])

    def xy(self) -> np.ndarray:
        return np.array([(pt.x, pt.y) for pt in self.points])


def polyline_from_arrays(ts: Iterable[float], xy: np.ndarray,
                         params: SurfaceParams) -> ProfilePolyline:
    pts = tuple(ProfilePoint(float(t), float(x), float(y))
                for t, (x, y) in zip(ts, xy))
    return ProfilePolyline(pts, params)


# -- closed-form g ------------------------------------------------------------

def _coeffs(p: SurfaceParams) -> tuple[float, float, float]:
    """Return (A, B, w) with g^2(t) = A + B*sin(w*t)."""
    H, C = p.H, p.C
    hyp = math.hypot(1.0, H)
    # factored discriminant (C - c_min)(C - c_neg); exact zero at the boundary
    disc = (C - c_min(H)) * (C - 2.0 * (H - hyp))
    if disc < 0.0:
        disc = 0.0  # only reachable within the isoparametric flag tolerance
    denom = 2.0 + 2.0 * H * H
    return (C - 2.0 * H) / denom, math.sqrt(disc) / denom, 2.0 * hyp


def g_squared_extrema(p: SurfaceParams) -> tuple[float, float]:
    """(g_min^2, g_max^2); the product equals 1/(1+H^2)."""
    A, B, _ = _coeffs(p)
    gmax2 = A + B
    return 1.0 / ((1.0 + p.H * p.H) * gmax2), gmax2


def _g_arrays(p: SurfaceParams, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    A, B, w = _coeffs(p)
    g2 = A + B * np.sin(w * ts)
    g = np.sqrt(g2)
    gp = B * w * np.cos(w * ts) / (2.0 * g)
    return g, gp


def g_eval(p: SurfaceParams, t: float) -> GState:
    """Evaluate g and its analytic derivative at parameter t.

    g attains its maximum at t = T/4 and its minimum at t = 3T/4.
    """
    A, B, w = _coeffs(p)
    g2 = A + B * math.sin(w * t)
    g = math.sqrt(g2)
    gp = B * w * math.cos(w * t) / (2.0 * g)
    return GState(t=t, g=g, g_prime=gp, period=p.period)


def ode_residual(p: SurfaceParams, t: float) -> float:
    """Residual of the conservation law; zero up to rounding by construction."""
    s = g_eval(p, t)
    lam = p.H + 1.0 / (s.g * s.g)
    return s.g_prime ** 2 + s.g ** 2 * (1.0 + lam * lam) - p.C


def principal_curvatures(p: SurfaceParams, t: float) -> tuple[float, float]:
    """(lambda, mu) with mean H and positive difference 2/g^2."""
    s = g_eval(p, t)
    inv = 1.0 / (s.g * s.g)
    return p.H + inv, p.H - inv


def radius_squared(p: SurfaceParams, t: float) -> float:
    """Closed form of |beta(t)|^2 (equivalently |alpha(t)|^2)."""
    H, C = p.H, p.C
    hyp = math.hypot(1.0, H)
    disc = (C - c_min(H)) * (C - 2.0 * (H - hyp))
    if disc < 0.0:
        disc = 0.0
    num = C + 2.0 * H + 2.0 * C * H * H \
        - math.sqrt(disc) * math.sin(2.0 * hyp * t)
    return num / (2.0 * C + 2.0 * C * H * H)


# -- angle integrands ----------------------------------------------------------

def theta_integrand_alpha(p: SurfaceParams, t: float) -> float:
    """Polar-angle rate sqrt(C) g (H + g^-2) / (C - g^2).

    Singular exactly on the axis hyperbola, where C - g^2 vanishes at the
    top of each period.
    """
    s = g_eval(p, t)
    denom = p.C - s.g * s.g
    if abs(denom) <= 1e-12 * max(1.0, abs(p.C)):
        raise SingularityError(
            f"alpha angle rate singular at t={t}: |C - g^2|={abs(denom):.3e}")
    return math.sqrt(p.C) * s.g * (p.H + 1.0 / (s.g * s.g)) / denom


def theta_integrand_beta(p: SurfaceParams, t: float) -> float:
    """Internal angle rate sqrt(C) g (H - g^-2) / (g'^2 + g^2); always finite."""
    s = g_eval(p, t)
    return math.sqrt(p.C) * s.g * (p.H - 1.0 / (s.g * s.g)) \
        / (s.g_prime ** 2 + s.g ** 2)


def _alpha_rate_array(p: SurfaceParams, ts: np.ndarray) -> np.ndarray:
    g, _ = _g_arrays(p, ts)
    denom = p.C - g * g
    if np.min(np.abs(denom)) <= 1e-12 * max(1.0, abs(p.C)):
        raise SingularityError("alpha angle rate singular inside sample range")
    return math.sqrt(p.C) * g * (p.H + 1.0 / (g * g)) / denom


def _beta_rate_array(p: SurfaceParams, ts: np.ndarray) -> np.ndarray:
    g, gp = _g_arrays(p, ts)
    return math.sqrt(p.C) * g * (p.H - 1.0 / (g * g)) / (gp * gp + g * g)


def _rate(p: SurfaceParams, which: Which):
    if which == "alpha":
        return lambda t: theta_integrand_alpha(p, t)
    if which == "beta":
        return lambda t: theta_integrand_beta(p, t)
    raise DomainError(f"unknown integrand kind {which!r}")


# -- cumulative angle ----------------------------------------------------------

@lru_cache(maxsize=4096)
def _theta_over_period(H: float, C: float, which: str, tol: float) -> float:
    p = SurfaceParams(H, C)
    T = p.period
    return integrate_adaptive(_rate(p, which), T / 4.0, 5.0 * T / 4.0, tol).value


def theta_period(p: SurfaceParams, which: Which = "beta",
                 tol: float = THETA_TOL) -> float:
    """Angle integral over one full period (independent of the window)."""
    if which == "alpha" and p.contains_axis:
        raise SingularityError("alpha angle undefined on the axis case C=-1/H")
    return _theta_over_period(p.H, p.C, which, tol)


def theta_cumulative(p: SurfaceParams, t: float, which: Which = "alpha",
                     tol: float = THETA_TOL) -> float:
    """Cumulative angle theta(t) = int_{T/4}^{T/4+t} of the chosen rate.

    The full-period value is integrated once and reused, so
    theta(t + q T) = theta(t) + q * theta(T) holds by construction.
    """
    if which == "alpha" and p.contains_axis:
        raise SingularityError("alpha angle undefined on the axis case C=-1/H")
    T = p.period
    q, r = divmod(t, T)
    base = q * _theta_over_period(p.H, p.C, which, tol) if q else 0.0
    if r == 0.0:
        return base
    part = integrate_adaptive(_rate(p, which), T / 4.0, T / 4.0 + r, tol).value
    return base + part


def _theta_samples(p: SurfaceParams, ts: np.ndarray, which: Which,
                   tol: float = THETA_TOL) -> np.ndarray:
    """Cumulative angle at each sample, sharing work between neighbours."""
    out = np.empty_like(ts)
    out[0] = theta_cumulative(p, ts[0] - p.period / 4.0, which, tol)
    step_tol = tol / max(1, len(ts) - 1)
    rate = _rate(p, which)
    acc = out[0]
    for i in range(1, len(ts)):
        acc += integrate_adaptive(rate, ts[i - 1], ts[i], step_tol).value
        out[i] = acc
    return out


# -- profile curves and immersion ----------------------------------------------

def _profile_angle(p: SurfaceParams, t: float, which: Which,
                   tol: float) -> float:
    # the curve at parameter t uses the angle accumulated from T/4 to t
    return theta_cumulative(p, t - p.period / 4.0, which, tol)


def profile_alpha(p: SurfaceParams, t: float,
                  tol: float = THETA_TOL) -> ProfilePoint:
    """Polar-form profile curve; undefined on the axis case C = -1/H."""
    if p.contains_axis:
        raise SingularityError("alpha parametrization fails at C=-1/H")
    s = g_eval(p, t)
    r = math.sqrt((p.C - s.g * s.g) / p.C)
    th = _profile_angle(p, t, "alpha", tol)
    return ProfilePoint(t=t, x=r * math.cos(th), y=r * math.sin(th))


def _beta_xy(p: SurfaceParams, ts: np.ndarray,
             thetas: np.ndarray) -> np.ndarray:
    g, gp = _g_arrays(p, ts)
    sc = math.sqrt(p.C)
    norm = np.sqrt(p.C * (gp * gp + g * g))
    cos_t, sin_t = np.cos(thetas), np.sin(thetas)
    u = -(sc * gp * cos_t + (p.H * g * g + 1.0) * sin_t) / norm
    v = (sc * gp * sin_t - (p.H * g * g + 1.0) * cos_t) / norm
    return np.column_stack([u, v])


def profile_beta(p: SurfaceParams, t: float,
                 tol: float = THETA_TOL) -> ProfilePoint:
    """Profile curve valid on the whole parameter space, axis case included."""
    th = _profile_angle(p, t, "beta", tol)
    xy = _beta_xy(p, np.array([t]), np.array([th]))[0]
    return ProfilePoint(t=t, x=float(xy[0]), y=float(xy[1]))


def immersion_phi(p: SurfaceParams, s: float, t: float,
                  tol: float = THETA_TOL) -> np.ndarray:
    """Unit 4-vector of the rotational immersion at (s, t)."""
    pt = profile_beta(p, t, tol)
    r2 = pt.x * pt.x + pt.y * pt.y
    ring = math.sqrt(max(0.0, 1.0 - r2))
    return np.array([ring * math.cos(s), ring * math.sin(s), pt.x, pt.y])


def sample_beta(p: SurfaceParams, t0: float, t1: float, n: int,
                tol: float = THETA_TOL) -> tuple[np.ndarray, np.ndarray]:
    """n uniform beta samples on [t0, t1]; returns (t values, xy array)."""
    if n < 2:
        raise DomainError("need at least 2 samples")
    ts = np.linspace(t0, t1, n)
    thetas = _theta_samples(p, ts, "beta", tol)
    return ts, _beta_xy(p, ts, thetas)


def fundamental_piece(p: SurfaceParams, n: int,
                      tol: float = THETA_TOL) -> ProfilePolyline:
    """The profile arc over [-T/4, 3T/4]: radius is maximal at both ends
    and minimal at the midpoint t = T/4."""
    T = p.period
    ts, xy = sample_beta(p, -T / 4.0, 3.0 * T / 4.0, n, tol)
    return polyline_from_arrays(ts, xy, p)
