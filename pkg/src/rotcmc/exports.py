"""Serialization of profiles, sweep tables and meshes.

Floats are written with 17 significant digits, which round-trips exactly for
IEEE doubles, so exported fixtures double as regression oracles.
"""
from __future__ import annotations

import json
import math
from typing import Iterable

from .errors import DomainError
from .mesh import SurfaceMesh
from .moduli import region_bounds
from .surface import ProfilePolyline, SurfaceParams, polyline_from_arrays

VERSION = "0.1.0"
FMT = "%.17g"

SWEEP_COLUMNS = ("H", "C", "K", "err", "side", "m_HC", "M_HC", "tag",
                 "sym_order")

SVG_SIZE = 1000        # unit disk mapped to a 1000x1000 viewport
SVG_SCALE = SVG_SIZE / 2


def _fnum(x) -> str:
    return "" if x == "" or x is None else FMT % x


def render_profile_csv(poly: ProfilePolyline) -> str:
    lines = ["t,x,y"]
    for pt in poly.points:
        lines.append(",".join(FMT % v for v in (pt.t, pt.x, pt.y)))
    return "\n".join(lines) + "\n"


def parse_profile_csv(text: str, params: SurfaceParams) -> ProfilePolyline:
    rows = [ln for ln in text.strip().splitlines() if ln]
    if not rows or rows[0] != "t,x,y":
        raise DomainError("profile CSV must start with header 't,x,y'")
    ts, xy = [], []
    for ln in rows[1:]:
        t, x, y = (float(v) for v in ln.split(","))
        ts.append(t)
        xy.append((x, y))
    import numpy as np
    return polyline_from_arrays(ts, np.array(xy), params)


def render_profile_json(poly: ProfilePolyline) -> str:
    m_hc, big_m = region_bounds(poly.params)
    doc = {
        "version": VERSION,
        "params": {"H": poly.params.H, "C": poly.params.C},
        "m_HC": m_hc,
        "M_HC": big_m,
        "points": [[pt.t, pt.x, pt.y] for pt in poly.points],
    }
    return json.dumps(doc, indent=1) + "\n"


def render_profile_svg(poly: ProfilePolyline) -> str:
    """Profile polyline plus the unit circle and the two bounding circles
    of radius sqrt(m_HC) and sqrt(M_HC)."""
    m_hc, big_m = region_bounds(poly.params)
    c = SVG_SIZE / 2

    def px(v: float) -> str:
        return "%.3f" % v

    pts = " ".join(f"{px(c + SVG_SCALE * pt.x)},{px(c - SVG_SCALE * pt.y)}"
                   for pt in poly.points)
    circles = "\n".join(
        f'  <circle cx="{c}" cy="{c}" r="{px(SVG_SCALE * r)}" fill="none" '
        f'stroke="{col}" stroke-width="1"/>'
        for r, col in ((1.0, "#888888"),
                       (math.sqrt(m_hc), "#bbbbbb"),
                       (math.sqrt(big_m), "#bbbbbb")))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" '
        f'height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">\n'
        f'  <!-- rotcmc {VERSION}; H={poly.params.H!r} C={poly.params.C!r}; '
        f'unit disk scaled to {SVG_SIZE}x{SVG_SIZE}, y axis up -->\n'
        f'{circles}\n'
        f'  <polyline points="{pts}" fill="none" stroke="#003366" '
        f'stroke-width="1.5"/>\n'
        f'</svg>\n')


def render_obj(mesh: SurfaceMesh) -> str:
    """ASCII OBJ: `v x y z` records then 1-indexed `f` quads."""
    lines = [f"v {FMT % x} {FMT % y} {FMT % z}" for x, y, z in mesh.vertices]
    lines.extend("f %d %d %d %d" % tuple(i + 1 for i in f)
                 for f in mesh.faces)
    return "\n".join(lines) + "\n"


def render_sweep_csv(rows: Iterable[dict]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        cells = []
        for col in SWEEP_COLUMNS:
            v = row.get(col, "")
            cells.append(str(v) if isinstance(v, (str, int)) else _fnum(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def render_sweep_json(rows: list[dict], params_echo: dict) -> str:
    doc = {"version": VERSION, "params": params_echo, "rows": rows}
    return json.dumps(doc, indent=1) + "\n"


def write_outputs(kind: str, payload, path: str) -> None:
    """Write one payload to disk; kind in {csv, json, svg, obj}.

    I/O failures are re-raised with the target path in the message.
    """
    if isinstance(payload, ProfilePolyline):
        renderers = {"csv": render_profile_csv, "json": render_profile_json,
                     "svg": render_profile_svg}
    elif isinstance(payload, SurfaceMesh):
        renderers = {"obj": render_obj}
    elif isinstance(payload, (list, tuple)):
        renderers = {"csv": render_sweep_csv,
                     "json": lambda rows: render_sweep_json(list(rows), {})}
    elif isinstance(payload, str):
        renderers = {kind: lambda s: s}   # pre-rendered content
    else:
        raise DomainError(f"cannot serialize {type(payload).__name__}")
    if kind not in renderers:
        raise DomainError(
            f"format {kind!r} not supported for {type(payload).__name__}")
    content = renderers[kind](payload)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)
    except OSError as exc:
        raise OSError(f"writing {path}: {exc}") from exc
