"""Frame-weighted Minkowski distances with their planar balls and conics."""

from .balls import (
    BallKind,
    BallSpec,
    ConicCoeffs,
    Frame2,
    Parallelogram4,
    Shape,
    ball_boundary_points,
    classify_ball_shape,
    common_points,
    euclidean_circle_conic,
    maximum_circle,
    taxicab_circle,
)
from .conics import (
    EccentrixForm,
    EllipseParams,
    LinePair,
    RectangleSpec,
    RhombusSpec,
    ball_from_ellipse,
    eccentrix_form_from_ellipse,
    ellipse_from_ball,
    ellipse_from_conic,
    ellipse_from_eccentrix_form,
    hyperbola_from_line_pair,
    maximum_ball_from_rhombus,
    scaffold,
    taxicab_ball_from_rectangle,
)
from .errors import (
    DegenerateFrameError,
    DependentFrameError,
    DimensionMismatchError,
    GeometryError,
    NotAMetricError,
    NotUnitError,
    UnsupportedExponentError,
    ZeroVectorError,
)
from .metric import INFINITY, Frame, MetricSpec, distance, distances, norm, validate_frame

__version__ = "0.1.0"
