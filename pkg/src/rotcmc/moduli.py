"""Moduli-space analysis: closure solvers, the proper-vs-dense classifier,
profile assembly from rotated fundamental pieces, self-intersection
detection, and the turning-angle diagnostic.

The classifier can only presume density: it reports "presumed_dense" when no
rational p/q with q <= q_max lies within tol of the normalized angle, and
records both knobs in the result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import angles
from .angles import SIDE_ABOVE, SIDE_BELOW, K, K_limit_cmin, K_limit_inf, b
from .errors import (
    ConvergenceError,
    DegenerateSegmentError,
    DomainError,
    OutOfRangeError,
)
from .surface import (
    ProfilePolyline,
    SurfaceParams,
    c_min,
    polyline_from_arrays,
    sample_beta,
    theta_period,
)

SIDE_WHOLE = "whole_ray"

TAG_ISOPARAMETRIC = "isoparametric"
TAG_CLOSED = "closed"
TAG_PRESUMED_DENSE = "presumed_dense"

# first/last polyline points closer than this are treated as a closed curve,
# making the wrap-around segment pair adjacent (excluded from intersection)
CLOSURE_EPS = 1e-6


@dataclass(frozen=True)
class ClosureSolution:
    """Parameters solving an angle-closure equation, with the residual.

    m/k is the rational multiple of 2 pi that was targeted; m carries the
    sign of the angle and may be None when the target was not given as a
    rational multiple.  Axis solutions use k = m and C = -1/H.
    """

    m: Optional[int]
    k: Optional[int]
    H: float
    C: float
    residual: float
    angle: float

    def __post_init__(self):
        if self.residual < 0:
            raise DomainError("residual must be nonnegative")


@dataclass(frozen=True)
class Classification:
    """Tagged outcome of the proper-vs-dense dichotomy."""

    tag: str
    symmetry_order: Optional[int]
    contains_axis: bool
    annulus: Optional[tuple[float, float]]
    embedded: Optional[bool]
    q_max: int
    tol: float

    def __post_init__(self):
        if self.tag not in (TAG_ISOPARAMETRIC, TAG_CLOSED, TAG_PRESUMED_DENSE):
            raise DomainError(f"unknown tag {self.tag!r}")
        if (self.annulus is not None) != (self.tag == TAG_PRESUMED_DENSE):
            raise DomainError("annulus present iff tag is presumed_dense")
        if (self.symmetry_order is not None) != (self.tag == TAG_CLOSED):
            raise DomainError("symmetry_order present iff tag is closed")


@dataclass(frozen=True)
class IntersectionReport:
    """Outcome of the profile self-intersection test."""

    intersects: bool
    witness: Optional[tuple[float, float, tuple[float, float]]]
    segments_tested: int

    def __post_init__(self):
        if (self.witness is not None) != self.intersects:
            raise DomainError("witness present iff intersects")


def region_bounds(p: SurfaceParams) -> tuple[float, float]:
    """(m_HC, M_HC): extrema of |beta|^2, bounding the annulus of Thm-style
    density statements.  m_HC vanishes exactly on the axis hyperbola."""
    H, C = p.H, p.C
    hyp2 = 1.0 + H * H
    disc = (C - c_min(H)) * (C - 2.0 * (H - math.hypot(1.0, H)))
    s = math.sqrt(max(disc, 0.0))
    big = (C + 2.0 * H + 2.0 * C * H * H + s) / (2.0 * C * hyp2)
    small = 2.0 * (C * H + 1.0) ** 2 / (C * (C + 2.0 * H + 2.0 * C * H * H + s))
    return small, big


def rational_approx(x: float, q_max: int = 64,
                    tol: float = 1e-9) -> Optional[tuple[int, int]]:
    """Smallest-denominator continued-fraction convergent p/q of x with
    q <= q_max and |x - p/q| < tol, in lowest terms; None if none qualifies."""
    if q_max < 1:
        raise DomainError("q_max must be >= 1")
    p_prev, q_prev = 1, 0
    p_cur, q_cur = int(math.floor(x)), 1
    frac = x - math.floor(x)
    while q_cur <= q_max:
        if abs(x - p_cur / q_cur) < tol:
            g = math.gcd(p_cur, q_cur)
            return p_cur // g, q_cur // g
        if frac <= 1e-18:
            return None
        inv = 1.0 / frac
        a = int(math.floor(inv))
        frac = inv - a
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur
    return None


# -- closure solvers -----------------------------------------------------------

def _attainable(H: float, side: str) -> tuple[float, float, float, float]:
    """Open K-interval (lo, hi) and C-interval (c_lo, c_hi) for one branch."""
    lo_c = c_min(H)
    if H >= 0:
        return K_limit_inf(H), K_limit_cmin(H), lo_c, math.inf
    ax = -1.0 / H
    left, right = angles.K_one_sided_limits(H)
    if side == SIDE_BELOW:
        return left, K_limit_cmin(H), lo_c, ax
    if side == SIDE_ABOVE:
        return K_limit_inf(H), right, ax, math.inf
    raise DomainError(f"unknown side {side!r}")


def _pick_side(H: float, target: float, side: str) -> str:
    if H >= 0:
        return SIDE_WHOLE
    if side in (SIDE_BELOW, SIDE_ABOVE):
        return side
    if side != SIDE_WHOLE:
        raise DomainError(f"unknown side {side!r}")
    for cand in (SIDE_BELOW, SIDE_ABOVE):
        lo, hi, _, _ = _attainable(H, cand)
        if lo < target < hi:
            return cand
    raise OutOfRangeError(
        f"target {target} not attainable for H={H} on either side of -1/H")


def solve_C_for_angle(H: float, target: float, side: str = SIDE_WHOLE,
                      tol: float = 1e-9) -> ClosureSolution:
    """Bisect the monotone branch C -> K(H, C) for K = target.

    The target must lie strictly between the branch limits (from
    K_limit_cmin, K_one_sided_limits and K_limit_inf); otherwise an
    OutOfRangeError is raised.
    """
    branch = _pick_side(H, target, side)
    k_lo, k_hi, c_lo, c_hi = _attainable(H, branch)
    if not k_lo < target < k_hi:
        raise OutOfRangeError(
            f"target {target} outside attainable K range "
            f"({k_lo:.9g}, {k_hi:.9g}) for H={H}, side={branch}")

    def k_at(c: float) -> float:
        return K(SurfaceParams(H, c)).value

    # low-C endpoint: approach the boundary until K exceeds the target
    span = (c_hi - c_lo) if math.isfinite(c_hi) else max(1.0, c_lo)
    w = span / 4.0
    while k_at(c_lo + w) <= target:
        w /= 8.0
        if w < 1e-13 * max(1.0, c_lo):
            raise OutOfRangeError(
                f"target {target} too close to the upper limit {k_hi}")
    lo = c_lo + w

    # high-C endpoint: K must drop below the target
    if math.isfinite(c_hi):
        w = span / 4.0
        while k_at(c_hi - w) >= target:
            w /= 8.0
            if w < 1e-8:
                raise OutOfRangeError(
                    f"target {target} too close to the lower limit {k_lo}")
        hi = c_hi - w
    else:
        hi = c_lo + max(1.0, 2.0 * abs(c_lo))
        while k_at(hi) >= target:
            hi = c_lo + 4.0 * (hi - c_lo)
            if hi > 1e13:
                raise OutOfRangeError(
                    f"target {target} too close to the C->infinity limit")

    value = math.nan
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = k_at(mid)
        if abs(value - target) < tol:
            ratio = rational_approx(target / (2.0 * math.pi), 64, 1e-9)
            m, k = ratio if ratio else (None, None)
            return ClosureSolution(m=m, k=k, H=H, C=mid,
                                   residual=abs(value - target), angle=value)
        if value > target:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection stalled: |K - target| = {abs(value - target):.3e} "
        f"after 200 iterations")


def solve_H_for_axis_symmetry(m: int, tol: float = 1e-9) -> ClosureSolution:
    """Find H_m < 0 with b(H_m) = 2 pi / m on the axis hyperbola C = -1/H.

    Requires m >= 3: b takes values in (0, pi) only.
    """
    if m < 3:
        raise DomainError(f"m={m}: 2*pi/m is outside the range (0, pi) of b")
    target = 2.0 * math.pi / m

    def b_at(h: float) -> float:
        return b(h).value

    lo = -1.0
    while b_at(lo) <= target:
        lo *= 2.0
    hi = -0.5
    while b_at(hi) >= target:
        hi /= 2.0

    value = math.nan
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = b_at(mid)
        if abs(value - target) < tol:
            return ClosureSolution(m=m, k=m, H=mid, C=-1.0 / mid,
                                   residual=abs(value - target), angle=value)
        if value > target:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection stalled: |b - 2pi/{m}| = {abs(value - target):.3e}")


# -- classification ------------------------------------------------------------

def classify(p: SurfaceParams, q_max: int = 64, tol: float = 1e-9,
             decide_embedded: bool = True) -> Classification:
    """Isoparametric / closed (Z_k) / presumed dense, per the normalized
    rotation angle.

    Closed surfaces with H < 0 are never embedded; for H >= 0 embeddedness
    is decided by a polyline self-intersection test over k pieces (skipped
    when decide_embedded is false).
    """
    if p.is_isoparametric:
        return Classification(TAG_ISOPARAMETRIC, None, False, None, None,
                              q_max, tol)
    if p.contains_axis:
        angle = b(p.H).value
        ratio = rational_approx(angle / (2.0 * math.pi), q_max, tol)
        if ratio is None:
            return Classification(TAG_PRESUMED_DENSE, None, True,
                                  region_bounds(p), None, q_max, tol)
        return Classification(TAG_CLOSED, ratio[1], True, None, False,
                              q_max, tol)
    angle = K(p).value
    ratio = rational_approx(angle / (2.0 * math.pi), q_max, tol)
    if ratio is None:
        return Classification(TAG_PRESUMED_DENSE, None, False,
                              region_bounds(p), None, q_max, tol)
    k_order = ratio[1]
    if p.H < 0:
        embedded: Optional[bool] = False
    elif decide_embedded:
        per_piece = max(100, 4096 // k_order)
        poly = profile_polyline_pieces(p, k_order, per_piece)
        embedded = not self_intersection(poly).intersects
    else:
        embedded = None
    return Classification(TAG_CLOSED, k_order, False, None, embedded,
                          q_max, tol)


# -- profile assembly ----------------------------------------------------------

def profile_polyline_pieces(p: SurfaceParams, pieces: int,
                            samples_per_piece: int = 256,
                            t0: float | None = None,
                            tol: float = 1e-10) -> ProfilePolyline:
    """Profile over `pieces` consecutive fundamental pieces.

    One period is sampled by quadrature; the remaining pieces are exact
    rotations of it by multiples of the per-period rotation angle, so the
    quasi-periodicity holds by construction.  t0 defaults to -T/4 (a
    maximal-radius endpoint); axis-containing profiles are conveniently
    anchored at t0 = T/4, where the curve passes through the origin.
    """
    if pieces < 1:
        raise DomainError("pieces must be >= 1")
    if samples_per_piece < 2:
        raise DomainError("need at least 2 samples per piece")
    T = p.period
    if t0 is None:
        t0 = -T / 4.0
    base_ts, base_xy = sample_beta(p, t0, t0 + T, samples_per_piece + 1, tol)
    omega = -theta_period(p, "beta", tol)
    ts_out = []
    xy_out = []
    for q in range(pieces):
        c, s = math.cos(q * omega), math.sin(q * omega)
        rot = np.array([[c, -s], [s, c]])
        seg = base_xy if q == pieces - 1 else base_xy[:-1]
        seg_ts = base_ts if q == pieces - 1 else base_ts[:-1]
        ts_out.append(seg_ts + q * T)
        xy_out.append(seg @ rot.T)
    return polyline_from_arrays(np.concatenate(ts_out),
                                np.vstack(xy_out), p)


def piece_rotation(p: SurfaceParams, tol: float = 1e-10) -> float:
    """Signed rotation carrying the profile one period forward; equals
    K(H,C) modulo 2 pi, and is continuous across the axis hyperbola."""
    return -theta_period(p, "beta", tol)


# -- polyline geometry ---------------------------------------------------------

def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def self_intersection(poly: ProfilePolyline,
                      tol: float = 1e-9) -> IntersectionReport:
    """All-pairs segment intersection test over non-adjacent segments.

    Proper crossings use exact-orientation sign tests; an epsilon-ball
    fallback (endpoint pairs closer than tol) catches vertex-on-vertex
    contacts such as repeated origin passages.  If the polyline is closed
    (first and last points within 1e-6) the wrap-around pair of segments
    counts as adjacent.
    """
    pts = poly.xy()
    n = len(pts)
    if n < 4:
        raise DomainError("need at least 4 points")
    ts = poly.t_values()
    a, bseg = pts[:-1], pts[1:]
    ns = n - 1
    closed = float(np.hypot(*(pts[0] - pts[-1]))) < CLOSURE_EPS
    tested = 0
    hit = None  # (i, j, kind)

    block = 128
    for i0 in range(0, ns - 2, block):
        i1 = min(i0 + block, ns - 2)
        j0 = i0 + 2
        ai = a[i0:i1, None, :]
        bi = bseg[i0:i1, None, :]
        aj = a[None, j0:ns, :]
        bj = bseg[None, j0:ns, :]
        ii = np.arange(i0, i1)[:, None]
        jj = np.arange(j0, ns)[None, :]
        valid = jj >= ii + 2
        if closed:
            valid &= ~((ii == 0) & (jj == ns - 1))
        tested += int(valid.sum())

        d1 = _cross(aj[..., 0], aj[..., 1], bj[..., 0], bj[..., 1],
                    ai[..., 0], ai[..., 1])
        d2 = _cross(aj[..., 0], aj[..., 1], bj[..., 0], bj[..., 1],
                    bi[..., 0], bi[..., 1])
        d3 = _cross(ai[..., 0], ai[..., 1], bi[..., 0], bi[..., 1],
                    aj[..., 0], aj[..., 1])
        d4 = _cross(ai[..., 0], ai[..., 1], bi[..., 0], bi[..., 1],
                    bj[..., 0], bj[..., 1])
        proper = (d1 * d2 < 0) & (d3 * d4 < 0) & valid
        if proper.any():
            r, c = np.argwhere(proper)[0]
            hit = (i0 + int(r), j0 + int(c), "proper")
            break

        # endpoint-to-endpoint near coincidence
        near = np.zeros_like(valid)
        for pi in (ai, bi):
            for pj in (aj, bj):
                dx = pi[..., 0] - pj[..., 0]
                dy = pi[..., 1] - pj[..., 1]
                near |= dx * dx + dy * dy < tol * tol
        near &= valid
        if near.any():
            r, c = np.argwhere(near)[0]
            hit = (i0 + int(r), j0 + int(c), "near")
            break

    if hit is None:
        return IntersectionReport(False, None, tested)

    i, j, kind = hit
    if kind == "proper":
        r = bseg[i] - a[i]
        s = bseg[j] - a[j]
        denom = r[0] * s[1] - r[1] * s[0]
        qp = a[j] - a[i]
        t_i = (qp[0] * s[1] - qp[1] * s[0]) / denom
        u_j = (qp[0] * r[1] - qp[1] * r[0]) / denom
        point = a[i] + t_i * r
        t_a = ts[i] + t_i * (ts[i + 1] - ts[i])
        t_b = ts[j] + u_j * (ts[j + 1] - ts[j])
    else:
        cands = [(ii, jj) for ii in (i, i + 1) for jj in (j, j + 1)]
        ii, jj = min(cands,
                     key=lambda c: float(np.hypot(*(pts[c[0]] - pts[c[1]]))))
        point = 0.5 * (pts[ii] + pts[jj])
        t_a, t_b = ts[ii], ts[jj]
    witness = (float(t_a), float(t_b), (float(point[0]), float(point[1])))
    return IntersectionReport(True, witness, tested)


def turning_angle(piece: ProfilePolyline) -> float:
    """Accumulated signed rotation of the unit tangent along the polyline
    (sum of exterior angles), in radians.

    Chord headings sample the tangent at segment midpoints, so a plain
    exterior-angle sum misses half a step at each open end and converges
    only linearly; the half-weight end correction below restores O(h^2)
    and is exact for a uniformly sampled closed circle.
    """
    pts = piece.xy()
    if len(pts) < 100:
        raise DomainError("turning angle needs at least 100 samples")
    d = np.diff(pts, axis=0)
    norms = np.hypot(d[:, 0], d[:, 1])
    if np.any(norms < 1e-14):
        raise DegenerateSegmentError("consecutive samples coincide")
    headings = np.arctan2(d[:, 1], d[:, 0])
    ext = np.diff(headings)
    ext = (ext + np.pi) % (2.0 * np.pi) - np.pi
    return float(ext.sum() + 0.5 * (ext[0] + ext[-1]))
