"""Render perspective views of a panorama from an interior camera.

Each output pixel shoots a ray through the image plane, intersects it
with the chosen surface (sphere or cylinder), and samples the panorama
at the equirectangular coordinates of the hit point.  The optional dolly
modes swap in a distortion-reduced camera first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dollyzoom import DEFAULT_COLS, DEFAULT_ROWS, DollyMode, adjust_camera
from .geometry import (
    CameraPose,
    Surface,
    cylinder_hits,
    dir_to_spherical,
    intersect_sphere,
    pixel_ray,
    spherical_to_uv,
    with_aspect,
)
from .panorama import PanoramaImage, RenderedImage, sample_bilinear

ASPECT_TOL = 1e-6


@dataclass(frozen=True)
class RenderRequest:
    pose: CameraPose
    surface: Surface = Surface.SPHERE
    dolly_mode: DollyMode = DollyMode.NONE
    out_width: int = 1280
    out_height: int = 720

    def __post_init__(self) -> None:
        if self.out_width < 1 or self.out_height < 1:
            raise ValueError("output size must be at least 1x1")


def sample_direction(pose: CameraPose, surface: Surface, X, Y):
    """Panorama (u, v) sampled by the ray through image position (X, Y).

    Accepts scalars or arrays.  Axis-parallel cylinder rays resolve to
    the pole rows (u = 0, v = 0 or 1).
    """
    rays = pixel_ray(pose, X, Y)
    if surface is Surface.SPHERE:
        theta, phi = dir_to_spherical(intersect_sphere(pose.pos, rays))
    else:
        points, pole, pole_theta = cylinder_hits(pose.pos, rays)
        with np.errstate(invalid="ignore"):
            theta, phi = dir_to_spherical(points)
        theta = np.where(pole, pole_theta, theta)
        phi = np.where(pole, 0.0, phi)
        if rays.ndim == 1:
            theta, phi = float(theta), float(phi)
    return spherical_to_uv((theta, phi))


def render(req: RenderRequest, pano: PanoramaImage) -> RenderedImage:
    """Render the request deterministically (bit-identical for identical
    inputs).

    The aspect ratio is always taken from the output size, overriding the
    pose's, so the image never stretches anisotropically.  Dolly modes
    other than NONE replace the pose with the adjusted one before
    sampling.
    """
    pose = req.pose
    out_aspect = req.out_width / req.out_height
    if abs(pose.aspect - out_aspect) > ASPECT_TOL:
        pose = with_aspect(pose, out_aspect)
    if req.dolly_mode is not DollyMode.NONE:
        pose = adjust_camera(
            pose, req.surface, req.dolly_mode, DEFAULT_ROWS, DEFAULT_COLS
        ).adjusted_pose

    X = (np.arange(req.out_width) + 0.5) / req.out_width
    Y = (np.arange(req.out_height) + 0.5) / req.out_height
    Xg, Yg = np.meshgrid(X, Y)
    u, v = sample_direction(pose, req.surface, Xg, Yg)
    colors = sample_bilinear(pano, u, v)
    pixels = np.clip(np.rint(colors * 255.0), 0.0, 255.0).astype(np.uint8)
    return RenderedImage(pixels=pixels)
