"""Shared fixtures and pose/panorama generators for the test suite."""

import math

import numpy as np
import pytest

from panowalk import PanoramaImage, make_camera


def random_interior_pose(rng, fovx=math.radians(90.0), aspect=16.0 / 9.0, r_max=0.85):
    """Random camera strictly inside the unit sphere with a valid basis."""
    pos = rng.uniform(-1.0, 1.0, 3)
    while np.linalg.norm(pos) >= r_max or np.linalg.norm(pos) < 1e-3:
        pos = rng.uniform(-1.0, 1.0, 3)
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    up = np.array([0.0, 0.0, 1.0]) if abs(d[2]) < 0.99 else np.array([1.0, 0.0, 0.0])
    return make_camera(pos, d, up, fovx, aspect)


def gradient_panorama(width=256, height=128):
    """Seam-continuous synthetic panorama: periodic in u, gradient in v."""
    u = (np.arange(width) + 0.5) / width
    v = (np.arange(height) + 0.5) / height
    uu, vv = np.meshgrid(u, v)
    r = 0.5 + 0.5 * np.sin(2.0 * math.pi * uu)
    g = vv
    b = 0.5 + 0.5 * np.cos(4.0 * math.pi * uu) * (1.0 - vv)
    rgb = np.stack([r, g, b], axis=-1)
    return PanoramaImage(pixels=np.clip(np.rint(rgb * 255.0), 0, 255).astype(np.uint8))


def constant_panorama(color=(40, 120, 200), width=64, height=32):
    px = np.zeros((height, width, 3), dtype=np.uint8)
    px[:] = color
    return PanoramaImage(pixels=px)


@pytest.fixture(scope="session")
def pano():
    return gradient_panorama()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
