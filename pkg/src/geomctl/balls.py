"""Circles of the frame-weighted Minkowski metrics in the plane.

For p = 1 and p = inf the circles are parallelograms whose vertices come
from a linear image of the standard diamond/square; for p = 2 they are
ellipses given as general quadratic coefficients.  Other exponents are
sampled by scaling directions onto the level set.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, GeometryError, UnsupportedExponentError
from .metric import (
    EPS_INDEP,
    INFINITY,
    Frame,
    MetricSpec,
    as_point,
    check_exponent,
    norms,
    validate_frame,
)

SHAPE_RTOL = 1e-9


class Shape(enum.Enum):
    PARALLELOGRAM = "parallelogram"
    RECTANGLE = "rectangle"
    RHOMBUS = "rhombus"
    SQUARE = "square"
    ELLIPSE = "ellipse"
    CIRCLE = "circle"


class BallKind(enum.Enum):
    TAXICAB = "taxicab"
    EUCLIDEAN = "euclidean"
    MAXIMUM = "maximum"
    GENERAL = "general"

    @classmethod
    def of(cls, p: float) -> BallKind:
        if p == 1:
            return cls.TAXICAB
        if p == 2:
            return cls.EUCLIDEAN
        if p == INFINITY:
            return cls.MAXIMUM
        return cls.GENERAL


def cross2(u, v) -> np.ndarray | float:
    u = np.asarray(u)
    v = np.asarray(v)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class Frame2:
    """Two independent unit vectors in the plane.

    ``tau`` is the determinant v11*v22 - v12*v21 and ``theta`` the
    non-obtuse angle between v1 and v2, so sin(theta) = |tau|.
    The lines l1, l2 of a ball pass through its center with normals v1, v2.
    """

    v1: np.ndarray
    v2: np.ndarray
    tau: float = field(init=False)
    theta: float = field(init=False)

    def __post_init__(self):
        frame = Frame(np.array([self.v1, self.v2], dtype=float))
        if frame.n != 2:
            raise DimensionMismatchError("Frame2 needs 2-D vectors")
        v1, v2 = (np.array(r) for r in frame.vectors)
        for v in (v1, v2):
            v.setflags(write=False)
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)
        object.__setattr__(self, "tau", float(v1[0] * v2[1] - v1[1] * v2[0]))
        object.__setattr__(self, "theta", math.acos(min(1.0, self.cos_theta)))

    @classmethod
    def from_rows(cls, rows, normalize: bool = False) -> Frame2:
        f = validate_frame(rows, normalize=normalize)
        return cls(f.vectors[0], f.vectors[1])

    @classmethod
    def from_frame(cls, frame: Frame) -> Frame2:
        if frame.n != 2:
            raise DimensionMismatchError(f"expected a planar frame, got n={frame.n}")
        return cls(frame.vectors[0], frame.vectors[1])

    @classmethod
    def identity(cls) -> Frame2:
        return cls((1.0, 0.0), (0.0, 1.0))

    def as_frame(self) -> Frame:
        return Frame(np.array([self.v1, self.v2]))

    @property
    def cos_theta(self) -> float:
        return abs(float(np.dot(self.v1, self.v2)))

    def is_orthogonal(self, tol: float = SHAPE_RTOL) -> bool:
        return self.cos_theta <= tol

    @property
    def directions(self) -> tuple[np.ndarray, np.ndarray]:
        """Direction vectors of l1 and l2 (each normal rotated by +90 degrees)."""
        return (np.array([-self.v1[1], self.v1[0]]),
                np.array([-self.v2[1], self.v2[0]]))


@dataclass(frozen=True, eq=False)
class BallSpec:
    frame: Frame2
    weights: tuple[float, float] = (1.0, 1.0)
    center: np.ndarray = (0.0, 0.0)
    radius: float = 1.0
    exponent: float = 2.0

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != 2 or not all(math.isfinite(x) and x > 0 for x in w):
            raise GeometryError(f"weights must be two positive reals, got {self.weights}")
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise GeometryError(f"radius must be > 0, got {self.radius}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "center", as_point(self.center, 2))
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "exponent", check_exponent(self.exponent))

    @property
    def kind(self) -> BallKind:
        return BallKind.of(self.exponent)

    @property
    def metric(self) -> MetricSpec:
        return MetricSpec(self.frame.as_frame(), np.array(self.weights), self.exponent)

    def with_exponent(self, exponent: float) -> BallSpec:
        return BallSpec(self.frame, self.weights, self.center, self.radius, exponent)

    def line_distances(self, points) -> np.ndarray:
        """Unweighted Euclidean distances of ``points`` to l1 and l2, shape (..., 2)."""
        diff = np.asarray(points, dtype=float) - self.center
        return np.abs(diff @ np.array([self.frame.v1, self.frame.v2]).T)


@dataclass(frozen=True, eq=False)
class Parallelogram4:
    vertices: np.ndarray
    shape: Shape

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.shape != (4, 2):
            raise DimensionMismatchError(f"need 4 planar vertices, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def center(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    @property
    def edges(self) -> np.ndarray:
        """Edge vectors V[k+1] - V[k], closing back to V[0]."""
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    def measured_shape(self, rtol: float = SHAPE_RTOL) -> Shape:
        """Classify from side lengths and the corner angle alone."""
        e = self.edges
        sides = np.linalg.norm(e, axis=1)
        scale = sides.max()
        equal_sides = abs(sides[0] - sides[1]) <= rtol * scale
        right_angle = abs(np.dot(e[0], e[1])) <= rtol * scale ** 2
        if equal_sides and right_angle:
            return Shape.SQUARE
        if right_angle:
            return Shape.RECTANGLE
        if equal_sides:
            return Shape.RHOMBUS
        return Shape.PARALLELOGRAM

    def boundary_distance(self, points) -> np.ndarray:
        """Euclidean distance of each point to the nearest edge segment."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        best = np.full(len(pts), np.inf)
        for a, e in zip(self.vertices, self.edges):
            t = np.clip(((pts - a) @ e) / (e @ e), 0.0, 1.0)
            best = np.minimum(best, np.linalg.norm(pts - (a + t[:, None] * e), axis=1))
        return best


@dataclass(frozen=True, eq=False)
class ConicCoeffs:
    """A x^2 + B y^2 + 2C xy + 2D x + 2E y + F = 0."""

    A: float
    B: float
    C: float
    D: float = 0.0
    E: float = 0.0
    F: float = -1.0

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.A, self.C, self.D],
                         [self.C, self.B, self.E],
                         [self.D, self.E, self.F]])

    @property
    def delta(self) -> float:
        return self.A * self.B - self.C * self.C

    @property
    def Delta(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def kind(self) -> str:
        if abs(self.Delta) <= EPS_INDEP * max(1.0, np.abs(self.matrix).max()) ** 3:
            return "degenerate"
        if self.delta > 0:
            if self.Delta / (self.A + self.B) >= 0:
                return "imaginary"
            round_ = abs(self.A - self.B) <= SHAPE_RTOL * abs(self.A) and abs(self.C) <= SHAPE_RTOL * abs(self.A)
            return "circle" if round_ else "ellipse"
        if self.delta < 0:
            return "hyperbola"
        return "parabola"

    def evaluate(self, points) -> np.ndarray | float:
        p = np.asarray(points, dtype=float)
        x, y = p[..., 0], p[..., 1]
        return (self.A * x * x + self.B * y * y + 2 * self.C * x * y
                + 2 * self.D * x + 2 * self.E * y + self.F)

    def gradient(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        m = self.matrix
        return 2 * (p @ m[:2, :2] + m[:2, 2])

    def translated(self, by) -> ConicCoeffs:
        """The same curve moved by the vector ``by``."""
        cx, cy = (float(c) for c in by)
        A, B, C = self.A, self.B, self.C
        D = self.D - A * cx - C * cy
        E = self.E - C * cx - B * cy
        F = (A * cx * cx + B * cy * cy + 2 * C * cx * cy
             - 2 * self.D * cx - 2 * self.E * cy + self.F)
        return ConicCoeffs(A, B, C, D, E, F)

    def negated(self) -> ConicCoeffs:
        return ConicCoeffs(-self.A, -self.B, -self.C, -self.D, -self.E, -self.F)


def line_conic_intersections(conic: ConicCoeffs, point, direction,
                             disc_tol: float = 1e-12) -> np.ndarray:
    """Points where the line point + t*direction meets ``conic``.

    Substitutes the parametric line into the implicit equation and solves the
    resulting quadratic in t.  Returns a (k, 2) array, k in {0, 1, 2}.
    """
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    m = conic.matrix
    q = m[:2, :2]
    lin = m[:2, 2]
    a = float(d @ q @ d)
    b = float(2 * (d @ (q @ p) + lin @ d))
    c = float(conic.evaluate(p))
    if abs(a) < EPS_INDEP:
        if abs(b) < EPS_INDEP:
            return np.empty((0, 2))
        return (p - (c / b) * d)[None, :]
    disc = b * b - 4 * a * c
    scale = max(b * b, abs(4 * a * c), 1.0)
    if disc < -disc_tol * scale:
        return np.empty((0, 2))
    if abs(disc) <= disc_tol * scale:
        return (p + (-b / (2 * a)) * d)[None, :]
    root = math.sqrt(disc)
    # numerically stable pair of roots
    qv = -0.5 * (b + math.copysign(root, b))
    t1, t2 = (qv / a, c / qv) if qv != 0 else (root / (2 * a), -root / (2 * a))
    ts = sorted((t1, t2), reverse=True)
    return np.array([p + t * d for t in ts])


@dataclass(frozen=True, eq=False)
class Polyline:
    points: np.ndarray
    closed: bool = True


@dataclass(frozen=True)
class ShapeReport:
    kind: Shape
    reasons: tuple[str, ...] = ()

    @property
    def weights_equal(self) -> bool:
        return "weights_equal" in self.reasons

    @property
    def frame_orthogonal(self) -> bool:
        return "frame_orthogonal" in self.reasons


def _require(spec: BallSpec, kind: BallKind) -> None:
    if spec.kind is not kind:
        raise UnsupportedExponentError(
            f"expected a {kind.value} ball, got exponent {spec.exponent}")


def _ccw(vertices: list[np.ndarray], tau: float) -> np.ndarray:
    # the vertex map has determinant sign(tau); reverse to keep counterclockwise
    v = np.array(vertices)
    if tau < 0:
        v = v[[0, 3, 2, 1]]
    return v


def taxicab_unit_vertices(frame: Frame2, weights) -> list[np.ndarray]:
    (v11, v12), (v21, v22) = frame.v1, frame.v2
    l1, l2 = weights
    tau = frame.tau
    a1 = np.array([v22, -v21]) / (l1 * tau)
    a2 = np.array([-v12, v11]) / (l2 * tau)
    return [a1, a2, -a1, -a2]


def maximum_unit_vertices(frame: Frame2, weights) -> list[np.ndarray]:
    (v11, v12), (v21, v22) = frame.v1, frame.v2
    l1, l2 = weights
    den = l1 * l2 * frame.tau
    b1 = np.array([-v12 * l1 + v22 * l2, v11 * l1 - v21 * l2]) / den
    b2 = np.array([-v12 * l1 - v22 * l2, v11 * l1 + v21 * l2]) / den
    return [b1, b2, -b1, -b2]


def taxicab_circle(spec: BallSpec) -> Parallelogram4:
    """Vertices A1..A4 (counterclockwise from A1) of a p = 1 circle.

    The diagonals A1A3 and A2A4 lie on l2 and l1 respectively.
    """
    _require(spec, BallKind.TAXICAB)
    unit = taxicab_unit_vertices(spec.frame, spec.weights)
    verts = spec.center + spec.radius * _ccw(unit, spec.frame.tau)
    return Parallelogram4(verts, classify_ball_shape(spec).kind)


def maximum_circle(spec: BallSpec) -> Parallelogram4:
    """Vertices B1..B4 (counterclockwise from B1) of a p = inf circle.

    Side B1B2 is parallel to l2 and side B1B4 to l1.
    """
    _require(spec, BallKind.MAXIMUM)
    unit = maximum_unit_vertices(spec.frame, spec.weights)
    verts = spec.center + spec.radius * _ccw(unit, spec.frame.tau)
    return Parallelogram4(verts, classify_ball_shape(spec).kind)


def euclidean_circle_conic(spec: BallSpec) -> ConicCoeffs:
    _require(spec, BallKind.EUCLIDEAN)
    (v11, v12), (v21, v22) = spec.frame.v1, spec.frame.v2
    s1, s2 = spec.weights[0] ** 2, spec.weights[1] ** 2
    origin = ConicCoeffs(
        A=s1 * v11 * v11 + s2 * v21 * v21,
        B=s1 * v12 * v12 + s2 * v22 * v22,
        C=s1 * v11 * v12 + s2 * v21 * v22,
        F=-spec.radius ** 2,
    )
    if not spec.center.any():
        return origin
    return origin.translated(spec.center)


def ball_boundary_points(spec: BallSpec, count: int) -> Polyline:
    """``count`` boundary points at equally spaced polar angles, counterclockwise.

    Each unit direction is rescaled by r / norm(direction), which lands
    exactly on the level set because the norm is absolutely homogeneous.
    """
    if count < 4:
        raise GeometryError(f"need at least 4 boundary samples, got {count}")
    k = np.arange(count)
    phi = 2 * np.pi * k / count
    dirs = np.column_stack([np.cos(phi), np.sin(phi)])
    # exact cardinal directions keep the axis samples free of cos/sin noise
    quarter = (4 * k) % count == 0
    dirs[quarter] = np.round(dirs[quarter])
    scale = spec.radius / norms(spec.metric, dirs)
    return Polyline(spec.center + dirs * scale[:, None], closed=True)


def classify_ball_shape(spec: BallSpec) -> ShapeReport:
    l1, l2 = spec.weights
    reasons = []
    if abs(l1 - l2) <= SHAPE_RTOL * max(l1, l2):
        reasons.append("weights_equal")
    if spec.frame.is_orthogonal():
        reasons.append("frame_orthogonal")
    eq = "weights_equal" in reasons
    orth = "frame_orthogonal" in reasons
    kind = spec.kind
    if kind is BallKind.TAXICAB:
        table = {(True, True): Shape.SQUARE, (True, False): Shape.RECTANGLE,
                 (False, True): Shape.RHOMBUS, (False, False): Shape.PARALLELOGRAM}
    elif kind is BallKind.MAXIMUM:
        table = {(True, True): Shape.SQUARE, (True, False): Shape.RHOMBUS,
                 (False, True): Shape.RECTANGLE, (False, False): Shape.PARALLELOGRAM}
    elif kind is BallKind.EUCLIDEAN:
        table = {(True, True): Shape.CIRCLE, (True, False): Shape.ELLIPSE,
                 (False, True): Shape.ELLIPSE, (False, False): Shape.ELLIPSE}
    else:
        raise UnsupportedExponentError(
            f"no closed-form shape table for exponent {spec.exponent}")
    return ShapeReport(table[eq, orth], tuple(reasons))


def common_points(spec: BallSpec) -> np.ndarray:
    """The four points where l1 and l2 cut the ball: Q1+, Q1-, Q2+, Q2-.

    On l1 only the l2 term of the distance is nonzero, so these points are
    shared by every exponent with the same frame, weights, center and radius.
    """
    d1, d2 = spec.frame.directions
    t = abs(spec.frame.tau)
    q1 = spec.radius * d1 / (spec.weights[1] * t)
    q2 = spec.radius * d2 / (spec.weights[0] * t)
    return spec.center + np.array([q1, -q1, q2, -q2])
