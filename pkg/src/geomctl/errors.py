"""Exception hierarchy for invalid geometric input."""


class GeometryError(ValueError):
    """Base class for every validation failure raised by this package."""


class DimensionMismatchError(GeometryError):
    pass


class ZeroVectorError(GeometryError):
    pass


class NotUnitError(GeometryError):
    pass


class DependentFrameError(GeometryError):
    pass


class DegenerateFrameError(GeometryError):
    """Raised when a strict ellipse is requested from a perpendicular frame."""


class UnsupportedExponentError(GeometryError):
    pass


class NotAMetricError(GeometryError):
    """The exponent is below 1, so the triangle inequality is not guaranteed."""
