"""Equirectangular panorama I/O and bilinear sampling.

Panoramas wrap horizontally (azimuthal continuity across the seam) and
clamp vertically at the pole rows.  Texel centers sit at half-texel
offsets, so u = (i + 0.5) / width samples texel i exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError


@dataclass(frozen=True)
class PanoramaImage:
    """Immutable 8-bit RGB equirectangular raster."""

    pixels: np.ndarray  # (height, width, 3) uint8, read-only

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3 or px.dtype != np.uint8:
            raise ValueError("pixels must be a (H, W, 3) uint8 array")
        if px.shape[1] < 2 or px.shape[0] < 1:
            raise ValueError("panorama must be at least 2x1")
        px = px.copy()
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class RenderedImage:
    """8-bit RGB output raster."""

    pixels: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3 or px.dtype != np.uint8:
            raise ValueError("pixels must be a (H, W, 3) uint8 array")
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def load_panorama(path) -> PanoramaImage:
    """Load a PNG/JPEG panorama as 8-bit RGB.

    Warns (does not fail) when the raster is not the expected 2:1
    equirectangular aspect.  Missing files raise OSError; undecodable
    files raise DecodeError.
    """
    try:
        with Image.open(path) as im:
            rgb = im.convert("RGB")
            data = np.asarray(rgb, dtype=np.uint8)
    except FileNotFoundError:
        raise
    except UnidentifiedImageError as exc:
        raise DecodeError(f"cannot decode image file: {path}") from exc
    h, w = data.shape[:2]
    if w != 2 * h:
        warnings.warn(
            f"panorama {path} is {w}x{h}, expected 2:1 equirectangular aspect",
            stacklevel=2,
        )
    return PanoramaImage(pixels=data)


def sample_bilinear(img: PanoramaImage, u, v) -> np.ndarray:
    """Bilinear sample at texture coordinates in [0, 1]^2.

    u wraps modulo the width, v clamps to the pole rows.  Accepts scalar
    or array u/v and returns float RGB in [0, 1] with shape (..., 3).
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    w = img.width
    h = img.height

    x = u * w - 0.5
    y = v * h - 0.5
    x0 = np.floor(x)
    y0 = np.floor(y)
    fx = (x - x0)[..., np.newaxis]
    fy = (y - y0)[..., np.newaxis]

    x0i = np.mod(x0.astype(np.int64), w)
    x1i = np.mod(x0i + 1, w)
    y0i = np.clip(y0.astype(np.int64), 0, h - 1)
    y1i = np.clip(y0i + 1, 0, h - 1)

    px = img.pixels
    c00 = px[y0i, x0i].astype(np.float64)
    c01 = px[y0i, x1i].astype(np.float64)
    c10 = px[y1i, x0i].astype(np.float64)
    c11 = px[y1i, x1i].astype(np.float64)

    top = c00 * (1.0 - fx) + c01 * fx
    bot = c10 * (1.0 - fx) + c11 * fx
    return (top * (1.0 - fy) + bot * fy) / 255.0


def write_image(img: RenderedImage, path) -> None:
    """Write a rendered image losslessly (PNG)."""
    Image.fromarray(img.pixels, mode="RGB").save(path)
