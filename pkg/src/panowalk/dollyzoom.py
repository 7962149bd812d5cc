"""Distortion-reducing alternative camera poses.

Moving an interior camera off the panorama center bends projected scene
lines.  This module quantifies that bending with a grid-based distortion
value and removes as much of it as a pure dolly (translation along the
looking ray) allows, either by the closed-form move to the point nearest
the origin or by a 1-D minimization of the distortion objective.

Offset sign convention, used everywhere here: t is a backward
displacement, ``new_pos = pos - t * dir``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    CornerBehindCamera,
    InfeasibleInterval,
    PointBehindCamera,
    RefitBehindCamera,
)
from .geometry import (
    INSIDE_MARGIN,
    CameraPose,
    PoleFallback,
    Surface,
    intersect_surface,
    normalize,
    pixel_ray,
    view_transform,
)

DEFAULT_ROWS = 10
DEFAULT_COLS = 10

# Grid vertices must keep at least this much view-space depth for a
# candidate offset to count as feasible.
DEPTH_EPS = 1e-6

# Offsets are searched within [-OFFSET_CAP, OFFSET_CAP] even when the
# surface leaves them unconstrained (vertical dolly in the infinite
# cylinder); beyond a few scene radii the objective is flat.
OFFSET_CAP = 64.0

_SCAN_POINTS = 512
_XATOL = 1e-12


class DollyMode(Enum):
    NONE = "none"
    HEURISTIC = "heuristic"
    OPTIMIZED = "optimized"


@dataclass(frozen=True)
class DistortionGrid:
    """Surface-projected vertex lattice used by the distortion metric.

    ``verts`` holds the (rows+1) x (cols+1) lattice after projection onto
    the unit sphere; ``verts_view`` is the same lattice in the camera's
    view space, with negative z for every non-degenerate pose.  ``B`` is
    the view-space depth of the pre-projection grid plane and
    ``H = B * tan(fovy / 2)`` its half-height.
    """

    rows: int
    cols: int
    verts: np.ndarray  # (rows+1, cols+1, 3)
    verts_view: np.ndarray  # (rows+1, cols+1, 3)
    B: float
    H: float

    def __post_init__(self) -> None:
        for name in ("verts", "verts_view"):
            v = np.asarray(getattr(self, name), dtype=np.float64).copy()
            v.flags.writeable = False
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class DollySolution:
    """Result of a dolly adjustment: offset, refitted pose, and the
    distortion values before and after."""

    t: float
    adjusted_pose: CameraPose
    d_original: float
    d_adjusted: float
    mode: DollyMode
    refit_failed: bool = False


def heuristic_offset(pose: CameraPose) -> float:
    """Backward offset that lands the camera at the point on its looking
    ray nearest the origin (t = pos . dir, so new_pos = pos - t * dir)."""
    return float(pose.pos @ pose.dir)


def refit_fov(pose: CameraPose, new_pos: np.ndarray, surface: Surface) -> CameraPose:
    """Refit FOV angles after moving the camera along its looking ray.

    The original left-middle and right-middle boundary rays are anchored
    where they meet the surface; the new frustum is opened so its
    boundary rays pass through the same two anchor points, which may make
    it horizontally skewed.  The vertical angle follows from the total
    horizontal tangent extent and the aspect ratio.
    """
    new_pos = np.asarray(new_pos, dtype=np.float64)
    anchors = []
    for X in (0.0, 1.0):
        hit = intersect_surface(pose.pos, pixel_ray(pose, X, 0.5), surface)
        if isinstance(hit, PoleFallback):
            raise RefitBehindCamera("boundary ray runs along the cylinder axis")
        anchors.append(hit)

    half_angles = []
    for anchor in anchors:
        ray = normalize(anchor - new_pos)
        cos_a = float(ray @ pose.dir)
        if cos_a <= 0.0:
            raise RefitBehindCamera("anchor point fell behind the moved camera")
        angle = math.atan2(float(np.linalg.norm(np.cross(pose.dir, ray))), cos_a)
        half_angles.append(angle)

    fovx_left, fovx_right = half_angles
    extent = (math.tan(fovx_left) + math.tan(fovx_right)) / pose.aspect
    return CameraPose(
        pos=new_pos,
        dir=pose.dir,
        up=pose.up,
        left=pose.left,
        fovx_left=fovx_left,
        fovx_right=fovx_right,
        fovy=2.0 * math.atan(extent / 2.0),
        aspect=pose.aspect,
    )


def build_grid(
    pose: CameraPose,
    surface: Surface,
    rows: int = DEFAULT_ROWS,
    cols: int = DEFAULT_COLS,
) -> DistortionGrid:
    """Build the distortion-metric lattice for a pose.

    The four image corners are projected from the camera onto the
    surface, bilinearly interpolated into a near-planar lattice, and each
    vertex is then normalized onto the unit sphere.  The normalization is
    what calibrates the metric: seen exactly from the origin the
    normalized lattice projects onto straight rows and columns, so the
    distortion value vanishes there for both surfaces.

    For near-vertical cylinder views the normalized lattice can collapse
    toward a pole and fall behind the camera; the grid is still built and
    the objective reports +inf at offsets that leave vertices behind
    (the optimizer then repairs the pose by dollying backward).
    """
    if rows < 2 or cols < 2:
        raise ValueError("grid needs rows >= 2 and cols >= 2")

    corners = np.empty((2, 2, 3))
    for yi, Y in enumerate((0.0, 1.0)):
        for xi, X in enumerate((0.0, 1.0)):
            hit = intersect_surface(pose.pos, pixel_ray(pose, X, Y), surface)
            if isinstance(hit, PoleFallback):
                raise CornerBehindCamera("corner ray runs along the cylinder axis")
            corners[yi, xi] = hit

    s = np.linspace(0.0, 1.0, rows + 1)[:, np.newaxis, np.newaxis]
    u = np.linspace(0.0, 1.0, cols + 1)[np.newaxis, :, np.newaxis]
    v = (
        (1.0 - s) * (1.0 - u) * corners[0, 0]
        + (1.0 - s) * u * corners[0, 1]
        + s * (1.0 - u) * corners[1, 0]
        + s * u * corners[1, 1]
    )
    verts = normalize(v)
    verts_view = view_transform(pose, verts)

    corner_depth = -view_transform(pose, corners.reshape(4, 3))[:, 2]
    B = float(np.mean(corner_depth))
    return DistortionGrid(
        rows=rows,
        cols=cols,
        verts=verts,
        verts_view=verts_view,
        B=B,
        H=B * math.tan(pose.fovy / 2.0),
    )


def linearity(a, b, c) -> float:
    """Squared 2D cross product of (b - a) and (c - a); zero iff the
    three points are collinear."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    cross = (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (
        c[..., 0] - a[..., 0]
    ) * (b[..., 1] - a[..., 1])
    return cross * cross if cross.ndim else float(cross * cross)


def project_with_offset(v_view, t: float, B: float, H: float, aspect: float):
    """Normalized image-plane position of a view-space point seen by the
    camera pulled back along its view axis by t.

    The ``H / (B + t)`` factor narrows the frame as the camera retreats so
    the grid plane stays framed (the dolly-zoom coupling).  Broadcasts
    over (..., 3) points.
    """
    v_view = np.asarray(v_view, dtype=np.float64)
    if B + t <= 0.0:
        raise PointBehindCamera(f"grid plane behind offset camera (B + t = {B + t})")
    depth = -v_view[..., 2] + t
    if np.any(depth <= 0.0):
        raise PointBehindCamera("point at or behind the offset camera")
    scale = H / (B + t)
    x = v_view[..., 0] / (aspect * scale * depth)
    y = v_view[..., 1] / (scale * depth)
    return np.stack([x, y], axis=-1)


def _grid_objective(verts_view: np.ndarray, t: float, B: float, H: float, aspect: float) -> float:
    """Distortion objective for one offset; +inf when infeasible."""
    if B + t <= 0.0:
        return math.inf
    depth = -verts_view[..., 2] + t
    if np.any(depth <= DEPTH_EPS):
        return math.inf
    scale = H / (B + t)
    x = verts_view[..., 0] / (aspect * scale * depth)
    y = verts_view[..., 1] / (scale * depth)
    return _linearity_sum(x, y)


def _linearity_sum(x: np.ndarray, y: np.ndarray) -> float:
    """Sum of squared collinearity residuals over consecutive vertex
    triples along every row and column (supports leading batch axes)."""
    row = (x[..., :, 1:-1] - x[..., :, :-2]) * (y[..., :, 2:] - y[..., :, :-2]) - (
        x[..., :, 2:] - x[..., :, :-2]
    ) * (y[..., :, 1:-1] - y[..., :, :-2])
    col = (x[..., 1:-1, :] - x[..., :-2, :]) * (y[..., 2:, :] - y[..., :-2, :]) - (
        x[..., 2:, :] - x[..., :-2, :]
    ) * (y[..., 1:-1, :] - y[..., :-2, :])
    total = (row * row).sum(axis=(-2, -1)) + (col * col).sum(axis=(-2, -1))
    return float(total) if total.ndim == 0 else total


class _RationalObjective:
    """Shared-grid objective reduced to per-triple rational coefficients.

    For a vertex triple (a, b, c) the projected cross product equals
    ``((B+t)/H)^2 / aspect * (alpha*t + beta) / ((t-za)(t-zb)(t-zc))``
    with constants alpha, beta built from the view-space coordinates, so
    one evaluation is a handful of small array ops.  Agrees with
    grid_objective to floating-point roundoff.
    """

    def __init__(self, verts_view: np.ndarray, B: float, H: float, aspect: float):
        x = verts_view[..., 0]
        y = verts_view[..., 1]
        z = verts_view[..., 2]

        def triples(arr):
            return (
                np.concatenate([arr[:, :-2].ravel(), arr[:-2, :].ravel()]),
                np.concatenate([arr[:, 1:-1].ravel(), arr[1:-1, :].ravel()]),
                np.concatenate([arr[:, 2:].ravel(), arr[2:, :].ravel()]),
            )

        ax, bx, cx = triples(x)
        ay, by, cy = triples(y)
        self.za, self.zb, self.zc = triples(z)
        k_bc = bx * cy - cx * by
        k_ca = cx * ay - ax * cy
        k_ab = ax * by - bx * ay
        self.alpha = k_bc + k_ca + k_ab
        self.beta = -(k_bc * self.za + k_ca * self.zb + k_ab * self.zc)
        self.B = B
        self.H = H
        self.aspect = aspect
        self.z_max = float(z.max())

    def __call__(self, t: float) -> float:
        if self.B + t <= 0.0 or t - self.z_max <= DEPTH_EPS:
            return math.inf
        r = (self.alpha * t + self.beta) / (
            (t - self.za) * (t - self.zb) * (t - self.zc)
        )
        scale = ((self.B + t) / self.H) ** 2 / self.aspect
        return float(r @ r) * scale * scale

    def scan(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)[:, np.newaxis]
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            r = (self.alpha * ts + self.beta) / (
                (ts - self.za) * (ts - self.zb) * (ts - self.zc)
            )
            scale = ((self.B + ts[:, 0]) / self.H) ** 2 / self.aspect
            vals = np.einsum("ij,ij->i", r, r) * scale * scale
        bad = (
            (self.B + ts[:, 0] <= 0.0)
            | (ts[:, 0] - self.z_max <= DEPTH_EPS)
            | ~np.isfinite(vals)
        )
        return np.where(bad, math.inf, vals)


def grid_objective(grid: DistortionGrid, t: float, aspect: float) -> float:
    """Distortion objective of ``grid`` at backward offset t (shared-grid
    form used by the optimizer); +inf when t is infeasible."""
    return _grid_objective(grid.verts_view, t, grid.B, grid.H, aspect)


def distortion_value(
    pose: CameraPose,
    surface: Surface,
    rows: int = DEFAULT_ROWS,
    cols: int = DEFAULT_COLS,
) -> float:
    """Sum of squared collinearity residuals of the pose's own grid
    projected through its own perspective; zero for a centered camera and
    +inf for degenerate poses whose grid reaches behind the camera."""
    grid = build_grid(pose, surface, rows, cols)
    return grid_objective(grid, 0.0, pose.aspect)


def feasible_offset_interval(
    pose: CameraPose, surface: Surface, grid: DistortionGrid
) -> tuple[float, float]:
    """Offset interval keeping the camera strictly inside the surface and
    every grid vertex in front of it, clipped to +-OFFSET_CAP.

    Raises InfeasibleInterval when empty (cannot happen for valid poses,
    where t = 0 is always feasible).
    """
    # Grid depths: -z + t > DEPTH_EPS for every vertex, and B + t > 0.
    lo = max(float(np.max(grid.verts_view[..., 2])) + DEPTH_EPS, -grid.B + DEPTH_EPS)
    hi = OFFSET_CAP
    lo = max(lo, -OFFSET_CAP)

    margin = 1.0 - INSIDE_MARGIN
    if surface is Surface.SPHERE:
        pd = float(pose.pos @ pose.dir)
        disc = pd * pd + margin * margin - float(pose.pos @ pose.pos)
        half = math.sqrt(disc)
        lo = max(lo, pd - half)
        hi = min(hi, pd + half)
    else:
        dxy = pose.dir[:2]
        pxy = pose.pos[:2]
        a = float(dxy @ dxy)
        if a > 1e-18:
            pd = float(pxy @ dxy) / a
            disc = pd * pd + (margin * margin - float(pxy @ pxy)) / a
            half = math.sqrt(disc)
            lo = max(lo, pd - half)
            hi = min(hi, pd + half)
        # else: vertical looking ray, the infinite cylinder never bounds t.

    if not lo < hi:
        raise InfeasibleInterval(f"no feasible offset (interval [{lo}, {hi}])")
    return lo, hi


def optimize_offset(
    pose: CameraPose,
    surface: Surface,
    rows: int = DEFAULT_ROWS,
    cols: int = DEFAULT_COLS,
) -> float:
    """Backward offset minimizing the shared-grid distortion objective.

    Runs a dense deterministic scan over the feasible interval (plus a
    finer scan around the closed-form heuristic offset where the minima
    live), then polishes the best bracket with a bounded 1-D minimizer.
    The returned offset never scores worse than t = 0 or the heuristic.
    """
    grid = build_grid(pose, surface, rows, cols)
    lo, hi = feasible_offset_interval(pose, surface, grid)
    fast = _RationalObjective(grid.verts_view, grid.B, grid.H, pose.aspect)
    t_heu = heuristic_offset(pose)

    candidates = [0.0, t_heu, lo + 1e-12, hi]

    spans = [(lo, hi)]
    near_lo = max(lo, t_heu - 4.0)
    near_hi = min(hi, t_heu + 4.0)
    if near_hi - near_lo < 0.5 * (hi - lo):
        spans.append((near_lo, near_hi))

    for span_lo, span_hi in spans:
        ts = np.linspace(span_lo, span_hi, _SCAN_POINTS)
        vals = fast.scan(ts)
        k = int(np.argmin(vals))
        if not math.isfinite(vals[k]):
            continue
        bl = ts[max(k - 1, 0)]
        bh = ts[min(k + 1, len(ts) - 1)]
        res = minimize_scalar(
            fast, bounds=(bl, bh), method="bounded", options={"xatol": _XATOL}
        )
        candidates.extend([float(ts[k]), float(res.x)])

    # Rank candidates with the canonical objective so the dominance
    # guarantees (never worse than t = 0 or the heuristic) hold exactly
    # under it.  Candidates outside [lo, hi] are inherently surface-safe
    # (t = 0 and the heuristic) and infeasible depths score +inf.
    def canonical(t: float) -> float:
        return _grid_objective(grid.verts_view, t, grid.B, grid.H, pose.aspect)

    return float(min(candidates, key=canonical))


def solution_from_offset(
    pose: CameraPose,
    surface: Surface,
    t: float,
    mode: DollyMode,
    rows: int = DEFAULT_ROWS,
    cols: int = DEFAULT_COLS,
    d_original: float | None = None,
) -> DollySolution:
    """Refit the camera for a solved offset and evaluate both poses.

    A zero offset leaves the pose untouched.  When the refit anchors fall
    behind the moved camera the solution falls back to the original pose
    with ``refit_failed`` set.
    """
    if d_original is None:
        d_original = distortion_value(pose, surface, rows, cols)
    if t == 0.0:
        return DollySolution(
            t=0.0,
            adjusted_pose=pose,
            d_original=d_original,
            d_adjusted=d_original,
            mode=mode,
        )
    try:
        adjusted = refit_fov(pose, pose.pos - t * pose.dir, surface)
    except RefitBehindCamera:
        return DollySolution(
            t=0.0,
            adjusted_pose=pose,
            d_original=d_original,
            d_adjusted=d_original,
            mode=mode,
            refit_failed=True,
        )
    return DollySolution(
        t=t,
        adjusted_pose=adjusted,
        d_original=d_original,
        d_adjusted=distortion_value(adjusted, surface, rows, cols),
        mode=mode,
    )


def adjust_camera(
    pose: CameraPose,
    surface: Surface,
    mode: DollyMode,
    rows: int = DEFAULT_ROWS,
    cols: int = DEFAULT_COLS,
) -> DollySolution:
    """Solve for the dolly offset in the requested mode and package the
    adjusted pose with before/after distortion values."""
    if mode is DollyMode.NONE:
        d = distortion_value(pose, surface, rows, cols)
        return DollySolution(
            t=0.0, adjusted_pose=pose, d_original=d, d_adjusted=d, mode=mode
        )
    if mode is DollyMode.HEURISTIC:
        t = heuristic_offset(pose)
    else:
        t = optimize_offset(pose, surface, rows, cols)
    return solution_from_offset(pose, surface, t, mode, rows, cols)
