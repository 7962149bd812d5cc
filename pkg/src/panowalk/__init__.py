"""Off-center perspective rendering of equirectangular panoramas.

Renders pinhole views of a single panorama from camera positions away
from the capture point, with a cylindrical projection mode that keeps
vertical scene features straight and dolly-zoom camera adjustments
(closed-form and optimized) that reduce barrel distortion.
"""

from .dollyzoom import (
    DistortionGrid,
    DollyMode,
    DollySolution,
    adjust_camera,
    build_grid,
    distortion_value,
    feasible_offset_interval,
    grid_objective,
    heuristic_offset,
    linearity,
    optimize_offset,
    project_with_offset,
    refit_fov,
    solution_from_offset,
)
from .errors import (
    CornerBehindCamera,
    DecodeError,
    DegenerateBasis,
    InfeasibleInterval,
    PanowalkError,
    PointBehindCamera,
    PoseOutsideSurface,
    RefitBehindCamera,
    ZeroVector,
)
from .evaluation import (
    SweepConfig,
    SweepRecord,
    quartiles,
    sample_poses,
    sweep,
    write_csv,
)
from .geometry import (
    CameraPose,
    PoleFallback,
    SphericalCoord,
    Surface,
    dir_to_spherical,
    intersect_cylinder,
    intersect_sphere,
    make_camera,
    pixel_ray,
    spherical_to_uv,
    view_transform,
    with_aspect,
)
from .panorama import (
    PanoramaImage,
    RenderedImage,
    load_panorama,
    sample_bilinear,
    write_image,
)
from .projector import RenderRequest, render, sample_direction

__version__ = "0.1.0"

__all__ = [
    "CameraPose",
    "CornerBehindCamera",
    "DecodeError",
    "DegenerateBasis",
    "DistortionGrid",
    "DollyMode",
    "DollySolution",
    "InfeasibleInterval",
    "PanoramaImage",
    "PanowalkError",
    "PointBehindCamera",
    "PoleFallback",
    "PoseOutsideSurface",
    "RefitBehindCamera",
    "RenderRequest",
    "RenderedImage",
    "SphericalCoord",
    "Surface",
    "SweepConfig",
    "SweepRecord",
    "ZeroVector",
    "adjust_camera",
    "build_grid",
    "dir_to_spherical",
    "distortion_value",
    "feasible_offset_interval",
    "grid_objective",
    "heuristic_offset",
    "intersect_cylinder",
    "intersect_sphere",
    "linearity",
    "load_panorama",
    "make_camera",
    "optimize_offset",
    "pixel_ray",
    "project_with_offset",
    "quartiles",
    "refit_fov",
    "render",
    "sample_bilinear",
    "sample_direction",
    "sample_poses",
    "solution_from_offset",
    "spherical_to_uv",
    "sweep",
    "view_transform",
    "with_aspect",
    "write_csv",
    "write_image",
]
