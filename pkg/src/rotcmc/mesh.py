"""Quad meshes of the immersed surface via stereographic projection.

The default pole (0, 0, 0, 1) is safe for every surface in the family: the
profile stays strictly inside the unit disk (max |beta|^2 = M_HC < 1), so no
surface point reaches the pole.  This is re-verified at build time rather
than assumed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleProximityError
from .surface import SurfaceParams, sample_beta

DEFAULT_POLE = (0.0, 0.0, 0.0, 1.0)
POLE_EPS = 1e-9


@dataclass(frozen=True)
class SurfaceMesh:
    """Stereographic image of an (s, t) grid with wrap-around quads in s."""

    vertices: np.ndarray           # (n_s * n_t, 3)
    faces: tuple[tuple[int, int, int, int], ...]
    n_s: int
    n_t: int
    pole: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.vertices) != self.n_s * self.n_t:
            raise DomainError("vertex count must be n_s * n_t")
        if not np.all(np.isfinite(self.vertices)):
            raise DomainError("mesh vertices must be finite")
        nv = len(self.vertices)
        for f in self.faces:
            if any(i < 0 or i >= nv for i in f):
                raise DomainError(f"face {f} references a missing vertex")


def _pole_basis(pole: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the hyperplane orthogonal to pole."""
    skip = int(np.argmax(np.abs(pole)))
    basis = []
    for i in range(4):
        if i == skip:
            continue
        v = np.zeros(4)
        v[i] = 1.0
        v -= np.dot(v, pole) * pole
        for u in basis:
            v -= np.dot(v, u) * u
        v /= np.linalg.norm(v)
        basis.append(v)
    return np.array(basis)


def stereographic_project(pt: np.ndarray, pole=DEFAULT_POLE) -> np.ndarray:
    """Project a unit 4-vector from the pole onto its orthogonal 3-plane.

    The pole's antipode maps to the origin; points orthogonal to the pole
    land on the unit sphere of the image.
    """
    pole = np.asarray(pole, dtype=float)
    if abs(np.linalg.norm(pole) - 1.0) > 1e-10:
        raise DomainError("pole must be a unit 4-vector")
    pt = np.asarray(pt, dtype=float)
    if np.linalg.norm(pt - pole) < POLE_EPS:
        raise PoleProximityError("point coincides with the projection pole")
    dot = float(np.dot(pt, pole))
    y = (pt - dot * pole) / (1.0 - dot)
    return _pole_basis(pole) @ y


def build_mesh(p: SurfaceParams, n_s: int, n_t: int, pieces: int = 1,
               pole=DEFAULT_POLE, tol: float = 1e-8) -> SurfaceMesh:
    """Mesh the surface over s in [0, 2pi) x t spanning `pieces` fundamental
    pieces; n_s * n_t vertices, quad faces, wrapping in the s direction."""
    if n_s < 3 or n_t < 3:
        raise DomainError("need n_s >= 3 and n_t >= 3")
    if pieces < 1:
        raise DomainError("pieces must be >= 1")
    pole_arr = np.asarray(pole, dtype=float)
    if abs(np.linalg.norm(pole_arr) - 1.0) > 1e-10:
        raise DomainError("pole must be a unit 4-vector")

    T = p.period
    t0 = -T / 4.0
    _, xy = sample_beta(p, t0, t0 + pieces * T, n_t, tol)
    ring = np.sqrt(np.maximum(0.0, 1.0 - np.sum(xy * xy, axis=1)))
    s_vals = np.linspace(0.0, 2.0 * math.pi, n_s, endpoint=False)

    # ambient grid, t-major: vertex (j, i) at index j * n_s + i
    cos_s, sin_s = np.cos(s_vals), np.sin(s_vals)
    amb = np.empty((n_t * n_s, 4))
    for j in range(n_t):
        rows = slice(j * n_s, (j + 1) * n_s)
        amb[rows, 0] = ring[j] * cos_s
        amb[rows, 1] = ring[j] * sin_s
        amb[rows, 2] = xy[j, 0]
        amb[rows, 3] = xy[j, 1]

    dist = np.linalg.norm(amb - pole_arr, axis=1)
    if float(dist.min()) < POLE_EPS:
        raise PoleProximityError(
            f"surface passes within {dist.min():.3e} of the projection pole")

    dots = amb @ pole_arr
    projected = (amb - np.outer(dots, pole_arr)) / (1.0 - dots)[:, None]
    vertices = projected @ _pole_basis(pole_arr).T

    faces = []
    for j in range(n_t - 1):
        for i in range(n_s):
            i2 = (i + 1) % n_s
            faces.append((j * n_s + i, j * n_s + i2,
                          (j + 1) * n_s + i2, (j + 1) * n_s + i))
    return SurfaceMesh(vertices=vertices, faces=tuple(faces),
                       n_s=n_s, n_t=n_t, pole=tuple(pole_arr))
