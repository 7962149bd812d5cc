"""Exception types shared across the package."""


class PanowalkError(Exception):
    """Base class for all panowalk-specific failures."""


class PoseOutsideSurface(PanowalkError):
    """Camera position is not strictly inside the projection surface."""


class DegenerateBasis(PanowalkError):
    """Looking direction and up vector are parallel or zero."""


class ZeroVector(PanowalkError):
    """A direction with zero length was passed where a direction is required."""


class DecodeError(PanowalkError):
    """File exists but cannot be decoded as a raster image."""


class RefitBehindCamera(PanowalkError):
    """A field-of-view refit anchor point falls behind the new camera."""


class CornerBehindCamera(PanowalkError):
    """A distortion-grid corner cannot be projected in front of the camera."""


class PointBehindCamera(PanowalkError):
    """Perspective projection requested for a point at or behind the camera."""


class InfeasibleInterval(PanowalkError):
    """No camera offset keeps the camera inside the surface with the grid in front."""
