"""Request/response models and handlers shared by the HTTP API and the CLI.

Each handler is a pure function from a pydantic request to a pydantic
response; numerics live in the core modules, transport concerns in api/cli.
"""
from __future__ import annotations

import math
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from . import __version__, angles, exports, moduli
from . import mesh as mesh_mod
from .errors import InvalidInputError
from .sweep import SweepSpec
from .sweep import sweep as run_grid
from .surface import (
    SurfaceParams,
    c_min,
    ode_residual,
    period,
    profile_beta,
    radius_squared,
)

Side = Literal["below_axis_C", "above_axis_C", "whole_ray"]


# -- angles ---------------------------------------------------------------------

class KValueRequest(BaseModel):
    H: float
    C: float
    tol: float = Field(default=1e-10, gt=0)


class BValueRequest(BaseModel):
    H: float
    tol: float = Field(default=1e-10, gt=0)


class AngleResponse(BaseModel):
    value: float
    error_estimate: float
    side: str


def k_value(req: KValueRequest) -> AngleResponse:
    ra = angles.K(SurfaceParams(req.H, req.C), tol=req.tol)
    return AngleResponse(value=ra.value, error_estimate=ra.error_estimate,
                         side=ra.side)


def b_value(req: BValueRequest) -> AngleResponse:
    ra = angles.b(req.H, tol=req.tol)
    return AngleResponse(value=ra.value, error_estimate=ra.error_estimate,
                         side=ra.side)


class LimitsRequest(BaseModel):
    H: float


class LimitsResponse(BaseModel):
    H: float
    c_min: float
    period: float
    K_limit_cmin: float
    K_limit_inf: float
    axis_C: Optional[float] = None
    b: Optional[float] = None
    K_left_at_axis: Optional[float] = None
    K_right_at_axis: Optional[float] = None


def limits(req: LimitsRequest) -> LimitsResponse:
    out = LimitsResponse(
        H=req.H, c_min=c_min(req.H), period=period(req.H),
        K_limit_cmin=angles.K_limit_cmin(req.H),
        K_limit_inf=angles.K_limit_inf(req.H))
    if req.H < 0:
        left, right = angles.K_one_sided_limits(req.H)
        out.axis_C = -1.0 / req.H
        out.b = angles.b(req.H).value
        out.K_left_at_axis = left
        out.K_right_at_axis = right
    return out


# -- profile --------------------------------------------------------------------

class ProfileRequest(BaseModel):
    H: float
    C: float
    pieces: int = Field(default=1, ge=1)
    samples: int = Field(default=400, ge=2)
    anchor: Literal["piece", "origin"] = "piece"
    fmt: Literal["csv", "json", "svg"] = "csv"


class ProfileResponse(BaseModel):
    H: float
    C: float
    pieces: int
    points: list[list[float]]
    m_HC: float
    M_HC: float
    fmt: str
    content: str


def profile(req: ProfileRequest) -> ProfileResponse:
    p = SurfaceParams(req.H, req.C)
    t0 = p.period / 4.0 if req.anchor == "origin" else None
    poly = moduli.profile_polyline_pieces(p, req.pieces, req.samples, t0=t0)
    renderer = {"csv": exports.render_profile_csv,
                "json": exports.render_profile_json,
                "svg": exports.render_profile_svg}[req.fmt]
    m_hc, big_m = moduli.region_bounds(p)
    return ProfileResponse(
        H=req.H, C=req.C, pieces=req.pieces,
        points=[[pt.t, pt.x, pt.y] for pt in poly.points],
        m_HC=m_hc, M_HC=big_m, fmt=req.fmt, content=renderer(poly))


# -- solvers --------------------------------------------------------------------

class SolveClosureRequest(BaseModel):
    H: float
    m: int
    k: int = Field(default=1, ge=1)
    side: Side = "whole_ray"
    tol: float = Field(default=1e-9, gt=0)


class SolveAxisRequest(BaseModel):
    m: int
    tol: float = Field(default=1e-9, gt=0)


class ClosureResponse(BaseModel):
    m: Optional[int]
    k: Optional[int]
    H: float
    C: float
    residual: float
    angle: float


def _closure_response(sol: moduli.ClosureSolution) -> ClosureResponse:
    return ClosureResponse(m=sol.m, k=sol.k, H=sol.H, C=sol.C,
                           residual=sol.residual, angle=sol.angle)


def solve_closure(req: SolveClosureRequest) -> ClosureResponse:
    if req.m == 0:
        raise InvalidInputError("m must be nonzero")
    g = math.gcd(abs(req.m), req.k)
    target = 2.0 * math.pi * (req.m // g) / (req.k // g)
    sol = moduli.solve_C_for_angle(req.H, target, side=req.side, tol=req.tol)
    return _closure_response(sol)


def solve_axis(req: SolveAxisRequest) -> ClosureResponse:
    return _closure_response(
        moduli.solve_H_for_axis_symmetry(req.m, tol=req.tol))


# -- classification / embeddedness ----------------------------------------------

class ClassifyRequest(BaseModel):
    H: float
    C: float
    q_max: int = Field(default=64, ge=1)
    tol: float = Field(default=1e-9, gt=0)
    decide_embedded: bool = True


class ClassificationResponse(BaseModel):
    tag: str
    symmetry_order: Optional[int]
    contains_axis: bool
    annulus: Optional[tuple[float, float]]
    embedded: Optional[bool]
    q_max: int
    tol: float


def classify(req: ClassifyRequest) -> ClassificationResponse:
    cl = moduli.classify(SurfaceParams(req.H, req.C), q_max=req.q_max,
                         tol=req.tol, decide_embedded=req.decide_embedded)
    return ClassificationResponse(
        tag=cl.tag, symmetry_order=cl.symmetry_order,
        contains_axis=cl.contains_axis, annulus=cl.annulus,
        embedded=cl.embedded, q_max=cl.q_max, tol=cl.tol)


class CheckEmbeddedRequest(BaseModel):
    H: float
    C: float
    pieces: int = Field(default=4, ge=1)
    samples: int = Field(default=400, ge=2)
    anchor: Literal["piece", "origin"] = "piece"
    tol: float = Field(default=1e-9, gt=0)


class WitnessModel(BaseModel):
    t_a: float
    t_b: float
    point: tuple[float, float]


class EmbeddedResponse(BaseModel):
    intersects: bool
    witness: Optional[WitnessModel]
    segments_tested: int
    pieces: int


def check_embedded(req: CheckEmbeddedRequest) -> EmbeddedResponse:
    p = SurfaceParams(req.H, req.C)
    t0 = p.period / 4.0 if req.anchor == "origin" else None
    poly = moduli.profile_polyline_pieces(p, req.pieces, req.samples, t0=t0)
    rep = moduli.self_intersection(poly, tol=req.tol)
    wit = None
    if rep.witness is not None:
        t_a, t_b, point = rep.witness
        wit = WitnessModel(t_a=t_a, t_b=t_b, point=point)
    return EmbeddedResponse(intersects=rep.intersects, witness=wit,
                            segments_tested=rep.segments_tested,
                            pieces=req.pieces)


# -- mesh -----------------------------------------------------------------------

class MeshRequest(BaseModel):
    H: float
    C: float
    n_s: int = Field(default=64, ge=3)
    n_t: int = Field(default=64, ge=3)
    pieces: int = Field(default=1, ge=1)
    pole: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 1.0)


class MeshResponse(BaseModel):
    n_s: int
    n_t: int
    vertex_count: int
    face_count: int
    obj: str


def build_mesh(req: MeshRequest) -> MeshResponse:
    m = mesh_mod.build_mesh(SurfaceParams(req.H, req.C), req.n_s, req.n_t,
                            pieces=req.pieces, pole=req.pole)
    return MeshResponse(n_s=m.n_s, n_t=m.n_t, vertex_count=len(m.vertices),
                        face_count=len(m.faces), obj=exports.render_obj(m))


# -- sweep ----------------------------------------------------------------------

class SweepRequest(BaseModel):
    h_lo: float
    h_hi: float
    h_steps: int = Field(ge=1)
    c_lo: float
    c_hi: float
    c_steps: int = Field(ge=1)
    c_mode: Literal["absolute", "offset"] = "absolute"
    outputs: list[str] = ["K", "bounds", "classification"]
    fmt: Literal["csv", "json"] = "csv"


class SweepResponse(BaseModel):
    columns: list[str]
    rows: list[dict]
    content: str


def run_sweep(req: SweepRequest) -> SweepResponse:
    spec = SweepSpec(
        h_lo=req.h_lo, h_hi=req.h_hi, h_steps=req.h_steps,
        c_lo=req.c_lo, c_hi=req.c_hi, c_steps=req.c_steps,
        c_mode=req.c_mode, outputs=frozenset(req.outputs))
    rows = run_grid(spec)
    if req.fmt == "csv":
        content = exports.render_sweep_csv(rows)
    else:
        content = exports.render_sweep_json(rows, req.model_dump(exclude={"fmt"}))
    return SweepResponse(columns=list(exports.SWEEP_COLUMNS), rows=rows,
                         content=content)


# -- verification ----------------------------------------------------------------

class VerifyRequest(BaseModel):
    seed: int = 42
    cases: int = Field(default=1000, ge=1)


class VerifyResponse(BaseModel):
    seed: int
    cases: int
    max_ode_residual: float
    max_radius_error: float
    tolerance: float
    passed: bool
    version: str = __version__


def verify(req: VerifyRequest) -> VerifyResponse:
    """Randomized identity suite: the conservation-law residual and the
    closed-form radius of the beta profile, both to 1e-10."""
    rng = np.random.default_rng(req.seed)
    tol = 1e-10
    max_ode = 0.0
    max_rad = 0.0
    for _ in range(req.cases):
        H = rng.uniform(-5.0, 5.0)
        C = c_min(H) + 100.0 * (1.0 - rng.random())   # offset in (0, 100]
        p = SurfaceParams(H, C)
        t = rng.uniform(0.0, 10.0 * p.period)
        max_ode = max(max_ode, abs(ode_residual(p, t)))
        pt = profile_beta(p, t)
        max_rad = max(max_rad,
                      abs(pt.x * pt.x + pt.y * pt.y - radius_squared(p, t)))
    return VerifyResponse(seed=req.seed, cases=req.cases,
                          max_ode_residual=max_ode, max_radius_error=max_rad,
                          tolerance=tol,
                          passed=max_ode < tol and max_rad < tol)
