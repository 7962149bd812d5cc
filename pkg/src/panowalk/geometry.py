"""Camera model, ray construction, and sphere/cylinder intersection math.

Scene scale: the panorama surface is a unit sphere (or a unit-radius,
infinite, z-axis-aligned cylinder) centered at the origin, and the camera
sits strictly inside it.  Coordinates are right-handed with +z up
(zenith 0) and +x at azimuth 0.

All functions are pure; vector arguments are numpy arrays of shape (3,),
and most operations also broadcast over stacked inputs of shape (..., 3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DegenerateBasis, PoseOutsideSurface, ZeroVector

# Camera must stay this far inside the surface so intersection
# discriminants stay bounded away from zero.
INSIDE_MARGIN = 1e-6

# Rays with less horizontal energy than this never meet the infinite
# cylinder; they are resolved to the panorama poles instead.
AXIS_EPS = 1e-9

TWO_PI = 2.0 * math.pi


class Surface(Enum):
    """Projection surface the panorama is mapped onto."""

    SPHERE = "sphere"
    CYLINDER = "cylinder"


class SphericalCoord(NamedTuple):
    theta: float  # zenith angle from +z, in [0, pi]
    phi: float  # azimuth about +z from +x, in [0, 2*pi)


@dataclass(frozen=True)
class PoleFallback:
    """Marker for rays that run along the cylinder axis and hit no wall.

    ``theta`` is 0 for rays toward the zenith and pi toward the nadir, so
    the sample resolves to the matching panorama pole row.
    """

    theta: float


@dataclass(frozen=True)
class CameraPose:
    """Interior perspective camera with a possibly skewed horizontal frustum.

    ``{left, up, dir}`` form a right-handed orthonormal basis with
    ``left = up x dir``.  ``fovx_left``/``fovx_right`` are half-angles to
    the left and right of ``dir``; ``fovy`` is the full vertical angle.
    """

    pos: np.ndarray
    dir: np.ndarray
    up: np.ndarray
    left: np.ndarray
    fovx_left: float
    fovx_right: float
    fovy: float
    aspect: float

    def __post_init__(self) -> None:
        for name in ("pos", "dir", "up", "left"):
            v = np.array(getattr(self, name), dtype=np.float64)
            v.flags.writeable = False
            object.__setattr__(self, name, v)

    @property
    def symmetric(self) -> bool:
        return self.fovx_left == self.fovx_right


def normalize(v: np.ndarray) -> np.ndarray:
    """Unit vector along ``v`` (broadcasts over (..., 3))."""
    v = np.asarray(v, dtype=np.float64)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / n


def make_camera(
    pos: np.ndarray,
    dir: np.ndarray,
    up: np.ndarray,
    fovx: float,
    aspect: float,
) -> CameraPose:
    """Build a symmetric-frustum camera from user-level parameters.

    ``up`` is re-orthogonalized against the normalized looking direction,
    the vertical FOV follows from ``fovx`` and ``aspect``, and both
    horizontal half-angles equal ``fovx / 2``.

    Raises PoseOutsideSurface if the position is not strictly inside the
    unit sphere and DegenerateBasis if ``dir`` and ``up`` do not span a
    plane.
    """
    pos = np.asarray(pos, dtype=np.float64)
    dir = np.asarray(dir, dtype=np.float64)
    up = np.asarray(up, dtype=np.float64)

    if np.linalg.norm(pos) >= 1.0 - INSIDE_MARGIN:
        raise PoseOutsideSurface(
            f"camera position {pos.tolist()} is outside the unit surface"
        )
    if not 0.0 < fovx < math.pi:
        raise ValueError(f"fovx must be in (0, pi), got {fovx}")
    if aspect <= 0.0:
        raise ValueError(f"aspect must be positive, got {aspect}")
    if np.linalg.norm(np.cross(dir, up)) < 1e-9:
        raise DegenerateBasis("dir and up are parallel or zero")

    d = dir / np.linalg.norm(dir)
    u = up - np.dot(up, d) * d
    u = u / np.linalg.norm(u)
    left = np.cross(u, d)

    half = fovx / 2.0
    fovy = 2.0 * math.atan(math.tan(half) / aspect)
    return CameraPose(
        pos=pos,
        dir=d,
        up=u,
        left=left,
        fovx_left=half,
        fovx_right=half,
        fovy=fovy,
        aspect=aspect,
    )


def with_aspect(pose: CameraPose, aspect: float) -> CameraPose:
    """Pose with a new aspect ratio; vertical FOV refitted to the
    horizontal tangent extent so pixels stay square."""
    if aspect <= 0.0:
        raise ValueError(f"aspect must be positive, got {aspect}")
    extent = (math.tan(pose.fovx_left) + math.tan(pose.fovx_right)) / aspect
    return replace(pose, fovy=2.0 * math.atan(extent / 2.0), aspect=aspect)


def pixel_ray(pose: CameraPose, X, Y) -> np.ndarray:
    """Unit ray through the normalized image-plane position (X, Y).

    X runs left to right, Y top to bottom, both in [0, 1].  The
    horizontal offset interpolates linearly in tangent space between the
    left and right frustum edges, which for a symmetric camera reduces to
    ``(1 - 2X) * tan(fovx / 2)``.  Broadcasts over array X, Y.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    h = (1.0 - X) * math.tan(pose.fovx_left) - X * math.tan(pose.fovx_right)
    v = (1.0 - 2.0 * Y) * math.tan(pose.fovy / 2.0)
    ray = (
        pose.dir
        + h[..., np.newaxis] * pose.left
        + v[..., np.newaxis] * pose.up
    )
    return normalize(ray)


def intersect_sphere(P: np.ndarray, ray: np.ndarray) -> np.ndarray:
    """Forward intersection of a ray from interior point P with the unit
    sphere (positive quadratic root; broadcasts over (..., 3) rays)."""
    P = np.asarray(P, dtype=np.float64)
    ray = np.asarray(ray, dtype=np.float64)
    a = np.sum(ray * ray, axis=-1)
    b = 2.0 * (ray @ P)
    c = float(P @ P) - 1.0
    t = (-b + np.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
    return P + t[..., np.newaxis] * ray


def intersect_cylinder(P: np.ndarray, ray: np.ndarray):
    """Forward intersection of a ray from an interior point with the
    infinite unit cylinder about the z-axis.

    Returns the hit point, or a PoleFallback when the ray is (nearly)
    axis-parallel and escapes through a pole instead of the wall.
    """
    P = np.asarray(P, dtype=np.float64)
    ray = np.asarray(ray, dtype=np.float64)
    a = ray[0] * ray[0] + ray[1] * ray[1]
    if a < AXIS_EPS:
        return PoleFallback(theta=0.0 if ray[2] > 0.0 else math.pi)
    b = 2.0 * (P[0] * ray[0] + P[1] * ray[1])
    c = P[0] * P[0] + P[1] * P[1] - 1.0
    t = (-b + math.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
    return P + t * ray


def cylinder_hits(P: np.ndarray, rays: np.ndarray):
    """Vectorized cylinder intersection for (..., 3) rays.

    Returns ``(points, pole_mask, pole_theta)``; entries of ``points``
    under ``pole_mask`` are meaningless and must be replaced using the
    matching ``pole_theta`` (0 or pi).
    """
    P = np.asarray(P, dtype=np.float64)
    rays = np.asarray(rays, dtype=np.float64)
    a = rays[..., 0] ** 2 + rays[..., 1] ** 2
    pole = a < AXIS_EPS
    a_safe = np.where(pole, 1.0, a)
    b = 2.0 * (P[0] * rays[..., 0] + P[1] * rays[..., 1])
    c = P[0] * P[0] + P[1] * P[1] - 1.0
    t = (-b + np.sqrt(np.maximum(b * b - 4.0 * a_safe * c, 0.0))) / (2.0 * a_safe)
    points = P + t[..., np.newaxis] * rays
    pole_theta = np.where(rays[..., 2] > 0.0, 0.0, math.pi)
    return points, pole, pole_theta


def intersect_surface(P: np.ndarray, ray: np.ndarray, surface: Surface):
    """Dispatch to the sphere or cylinder intersection for a single ray."""
    if surface is Surface.SPHERE:
        return intersect_sphere(P, ray)
    return intersect_cylinder(P, ray)


def dir_to_spherical(v: np.ndarray) -> SphericalCoord:
    """Zenith/azimuth angles of a direction (or stacked directions).

    ``theta = acos(z / |v|)`` and ``phi = atan2(y, x)`` wrapped to
    [0, 2*pi); at the poles phi is 0 by the atan2(0, 0) convention.
    """
    v = np.asarray(v, dtype=np.float64)
    n = np.linalg.norm(v, axis=-1)
    if v.ndim == 1 and n == 0.0:
        raise ZeroVector("cannot take spherical coordinates of the zero vector")
    theta = np.arccos(np.clip(v[..., 2] / n, -1.0, 1.0))
    phi = np.mod(np.arctan2(v[..., 1], v[..., 0]), TWO_PI)
    if v.ndim == 1:
        return SphericalCoord(float(theta), float(phi))
    return SphericalCoord(theta, phi)


def spherical_to_uv(s: SphericalCoord):
    """Equirectangular texture coordinates ``(phi / 2pi, theta / pi)``."""
    theta, phi = s
    return phi / TWO_PI, theta / math.pi


def view_transform(pose: CameraPose, p: np.ndarray) -> np.ndarray:
    """World point(s) in camera view space.

    The camera sits at the view-space origin with ``left``, ``up``,
    ``dir`` mapped to -x, +y, -z, so visible points have negative z.
    """
    q = np.asarray(p, dtype=np.float64) - pose.pos
    return np.stack(
        [-(q @ pose.left), q @ pose.up, -(q @ pose.dir)],
        axis=-1,
    )
