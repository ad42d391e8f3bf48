"""Ellipses and their eccentrices, realised as metric balls.

With unit weights, the p = 2 circle of radius r for lines l1, l2 through C
is the ellipse of points whose squared distances to l1 and l2 sum to r^2.
The two lines are called the eccentrices of that ellipse; they are the
diagonals of its axis-aligned bounding rectangle.  Rectangles and rhombi
are likewise the p = 1 and p = inf circles for suitable line pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .balls import (
    ConicCoeffs,
    Frame2,
    cross2,
    line_conic_intersections,
    rotation,
)
from .errors import DegenerateFrameError, DependentFrameError, GeometryError
from .metric import EPS_INDEP, INFINITY, as_point


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = float(np.hypot(v[0], v[1]))
    if n < EPS_INDEP:
        raise GeometryError("zero direction vector")
    return v / n


def _angle_of(u) -> float:
    """Direction angle of ``u`` as an undirected axis, in [0, pi)."""
    a = math.atan2(u[1], u[0]) % math.pi
    return 0.0 if a >= math.pi else a


def _bisector(d1: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """Unit bisector of the non-obtuse angle between the lines along d1, d2."""
    # perpendicular lines take the difference, which round-trips circles
    s = d1 + d2 if float(d1 @ d2) > 0 else d1 - d2
    return s / np.hypot(s[0], s[1])


@dataclass(frozen=True, eq=False)
class EllipseParams:
    """Ellipse with semi-axes a >= b > 0; ``angle`` is the major-axis direction.

    Passing a < b is accepted and normalised by swapping the axes and
    turning the angle by pi/2.
    """

    center: np.ndarray
    a: float
    b: float
    angle: float = 0.0

    def __post_init__(self):
        a, b, angle = float(self.a), float(self.b), float(self.angle)
        if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
            raise GeometryError(f"semi-axes must be positive, got a={a}, b={b}")
        if a < b:
            a, b, angle = b, a, angle + math.pi / 2
        angle %= math.pi
        if angle >= math.pi:
            angle = 0.0
        object.__setattr__(self, "center", as_point(self.center, 2))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "angle", angle)

    @property
    def axes(self) -> np.ndarray:
        """Rotation whose columns are the major and minor axis directions."""
        return rotation(self.angle)

    @property
    def is_circle(self) -> bool:
        return self.a - self.b <= 1e-12 * self.a

    def to_world(self, local) -> np.ndarray:
        return np.asarray(local, dtype=float) @ self.axes.T + self.center

    def to_local(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.center) @ self.axes

    def points(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.to_world(np.stack([self.a * np.cos(t), self.b * np.sin(t)], axis=-1))

    def implicit(self, points) -> np.ndarray:
        """x'^2/a^2 + y'^2/b^2 - 1 in the ellipse's own axes."""
        q = self.to_local(points)
        return (q[..., 0] / self.a) ** 2 + (q[..., 1] / self.b) ** 2 - 1.0

    def conic(self) -> ConicCoeffs:
        r = self.axes
        m = r @ np.diag([1 / self.a ** 2, 1 / self.b ** 2]) @ r.T
        return ConicCoeffs(m[0, 0], m[1, 1], m[0, 1]).translated(self.center)


@dataclass(frozen=True, eq=False)
class LinePair:
    """Two lines through a common ``point`` with unit directions dir1, dir2."""

    point: np.ndarray
    dir1: np.ndarray
    dir2: np.ndarray
    theta: float = field(init=False)

    def __post_init__(self):
        d1, d2 = _unit(self.dir1), _unit(self.dir2)
        if abs(cross2(d1, d2)) <= EPS_INDEP:
            raise DependentFrameError("the two lines are parallel")
        for d in (d1, d2):
            d.setflags(write=False)
        object.__setattr__(self, "point", as_point(self.point, 2))
        object.__setattr__(self, "dir1", d1)
        object.__setattr__(self, "dir2", d2)
        object.__setattr__(self, "theta", math.acos(min(1.0, self.cos_theta)))

    @classmethod
    def from_frame(cls, frame: Frame2, point=(0.0, 0.0)) -> LinePair:
        """The lines through ``point`` with normals v1 and v2."""
        d1, d2 = frame.directions
        return cls(point, d1, d2)

    @property
    def cos_theta(self) -> float:
        return abs(float(self.dir1 @ self.dir2))

    @property
    def normals(self) -> tuple[np.ndarray, np.ndarray]:
        # inverse of Frame2.directions
        return (np.array([self.dir1[1], -self.dir1[0]]),
                np.array([self.dir2[1], -self.dir2[0]]))

    def frame(self) -> Frame2:
        return Frame2(*self.normals)

    def distances(self, points) -> np.ndarray:
        """Euclidean distances of ``points`` to each line, shape (..., 2)."""
        diff = np.asarray(points, dtype=float) - self.point
        n1, n2 = self.normals
        return np.stack([np.abs(diff @ n1), np.abs(diff @ n2)], axis=-1)

    def same_lines(self, other: LinePair, tol: float = 1e-9) -> bool:
        """True if both pairs describe the same two lines, in either order."""
        if np.linalg.norm(self.point - other.point) > tol * max(1.0, np.abs(self.point).max()):
            return False

        def parallel(u, v):
            return abs(cross2(u, v)) <= tol

        return ((parallel(self.dir1, other.dir1) and parallel(self.dir2, other.dir2))
                or (parallel(self.dir1, other.dir2) and parallel(self.dir2, other.dir1)))


@dataclass(frozen=True, eq=False)
class EccentrixForm:
    """Ellipse as the locus d(P, l1)^2 + d(P, l2)^2 = constant."""

    lines: LinePair
    constant: float

    def __post_init__(self):
        c = float(self.constant)
        if not (c > 0 and math.isfinite(c)):
            raise GeometryError(f"constant must be > 0, got {self.constant}")
        object.__setattr__(self, "constant", c)

    def residual(self, points) -> np.ndarray:
        d = self.lines.distances(points)
        return (d ** 2).sum(axis=-1) - self.constant


@dataclass(frozen=True, eq=False)
class RectangleSpec:
    """Rectangle with sides 2a (along ``angle``) and 2b."""

    center: np.ndarray
    half_sides: tuple[float, float]
    angle: float = 0.0

    def __post_init__(self):
        a, b = (float(x) for x in self.half_sides)
        if not (a > 0 and b > 0):
            raise GeometryError(f"half sides must be positive, got {self.half_sides}")
        object.__setattr__(self, "center", as_point(self.center, 2))
        object.__setattr__(self, "half_sides", (a, b))

    def corners(self) -> np.ndarray:
        a, b = self.half_sides
        local = np.array([[a, b], [-a, b], [-a, -b], [a, -b]])
        return local @ rotation(self.angle).T + self.center


@dataclass(frozen=True, eq=False)
class RhombusSpec:
    """Rhombus with diagonals 2e (along ``angle``) and 2f."""

    center: np.ndarray
    half_diagonals: tuple[float, float]
    angle: float = 0.0

    def __post_init__(self):
        e, f = (float(x) for x in self.half_diagonals)
        if not (e > 0 and f > 0):
            raise GeometryError(f"half diagonals must be positive, got {self.half_diagonals}")
        object.__setattr__(self, "center", as_point(self.center, 2))
        object.__setattr__(self, "half_diagonals", (e, f))

    def corners(self) -> np.ndarray:
        e, f = self.half_diagonals
        local = np.array([[e, 0.0], [0.0, f], [-e, 0.0], [0.0, -f]])
        return local @ rotation(self.angle).T + self.center


def _semi_axes(scale: float, cos_theta: float) -> tuple[float, float]:
    return scale / math.sqrt(1 - cos_theta), scale / math.sqrt(1 + cos_theta)


def ellipse_from_ball(frame: Frame2, center, r: float, strict: bool = False) -> EllipseParams:
    """The ellipse traced by the unit-weight p = 2 circle of radius ``r``.

    Semi-axes are r / sqrt(1 -+ cos(theta)); the major axis bisects the
    non-obtuse angle between l1 and l2.  A perpendicular frame yields a
    circle of radius r, rejected only when ``strict`` is set.
    """
    if not r > 0:
        raise GeometryError(f"radius must be > 0, got {r}")
    if strict and frame.is_orthogonal():
        raise DegenerateFrameError("perpendicular frame gives a circle, not a strict ellipse")
    a, b = _semi_axes(r, frame.cos_theta)
    d1, d2 = frame.directions
    return EllipseParams(center, a, b, _angle_of(_bisector(d1, d2)))


def _diagonal_normals(a: float, b: float, angle: float) -> tuple[np.ndarray, np.ndarray]:
    # unit normals of the lines b x - a y = 0 and b x + a y = 0, rotated into place
    n = math.hypot(a, b)
    rot = rotation(angle)
    return rot @ np.array([b, -a]) / n, rot @ np.array([b, a]) / n


def ball_from_ellipse(e: EllipseParams) -> tuple[Frame2, float]:
    """Frame and radius of the unit-weight p = 2 circle equal to ``e``.

    For a circle every perpendicular pair works; the pair at +-45 degrees
    to ``e.angle`` is returned.
    """
    v1, v2 = _diagonal_normals(e.a, e.b, e.angle)
    r = math.sqrt(2) * e.a * e.b / math.hypot(e.a, e.b)
    return Frame2(v1, v2), r


def taxicab_ball_from_rectangle(rect: RectangleSpec) -> tuple[Frame2, float]:
    a, b = rect.half_sides
    v1, v2 = _diagonal_normals(a, b, rect.angle)
    return Frame2(v1, v2), 2 * a * b / math.hypot(a, b)


def maximum_ball_from_rhombus(rh: RhombusSpec) -> tuple[Frame2, float]:
    """Frame normal to the rhombus sides and radius ef / sqrt(e^2 + f^2)."""
    e, f = rh.half_diagonals
    n = math.hypot(e, f)
    rot = rotation(rh.angle)
    # sides run along (-e, f) and (-e, -f)
    v1 = rot @ np.array([f, e]) / n
    v2 = rot @ np.array([f, -e]) / n
    return Frame2(v1, v2), e * f / n


def eccentricity(e: EllipseParams) -> float:
    return math.sqrt(max(0.0, 1 - (e.b / e.a) ** 2))


def eccentricity_from_angle(theta: float) -> float:
    """Eccentricity of any ellipse whose eccentrices meet at angle ``theta``.

    Evaluates sqrt(1 - tan^2(theta/2)) as sqrt(cos theta) / cos(theta/2),
    which avoids cancellation as theta approaches pi/2.
    """
    return math.sqrt(max(0.0, math.cos(theta))) / math.cos(theta / 2)


def eccentric_radius(e: EllipseParams) -> float:
    return math.hypot(e.a, e.b) / math.sqrt(2)


def eccentrix_form_from_ellipse(e: EllipseParams) -> EccentrixForm:
    rot = rotation(e.angle)
    lines = LinePair(e.center, rot @ np.array([e.a, e.b]), rot @ np.array([e.a, -e.b]))
    a2, b2 = e.a ** 2, e.b ** 2
    return EccentrixForm(lines, 2 * a2 * b2 / (a2 + b2))


def ellipse_from_eccentrix_form(f: EccentrixForm) -> EllipseParams:
    a, b = _semi_axes(math.sqrt(f.constant), f.lines.cos_theta)
    return EllipseParams(f.lines.point, a, b,
                         _angle_of(_bisector(f.lines.dir1, f.lines.dir2)))


def ellipse_from_conic(conic: ConicCoeffs) -> EllipseParams:
    """Recover the parameters of an ellipse given implicitly.

    Works for any weights, unlike :func:`ellipse_from_ball`.
    """
    if conic.delta <= 0:
        raise GeometryError(f"not an ellipse (delta={conic.delta:.3g})")
    m = conic.matrix
    q = m[:2, :2]
    center = np.linalg.solve(q, -m[:2, 2])
    level = -float(conic.evaluate(center))
    if level <= 0:
        raise GeometryError("conic has no real points")
    evals, evecs = np.linalg.eigh(q)
    # smallest eigenvalue belongs to the major axis
    a = math.sqrt(level / evals[0])
    b = math.sqrt(level / evals[1])
    return EllipseParams(center, a, b, _angle_of(evecs[:, 0]))


def conjugate_diameter_chords(e: EllipseParams) -> np.ndarray:
    """Chords cut from ``e`` by its two eccentrices, shape (2, 2, 2).

    ``chords[i]`` holds the two endpoints on eccentrix i.
    """
    lines = eccentrix_form_from_ellipse(e).lines
    conic = e.conic()
    chords = []
    for d in (lines.dir1, lines.dir2):
        pts = line_conic_intersections(conic, e.center, d)
        if len(pts) != 2:
            raise GeometryError("eccentrix does not cut the ellipse in two points")
        chords.append(pts)
    return np.array(chords)


def _intersect(p1, d1, p2, d2) -> np.ndarray:
    # solve p1 + s d1 = p2 + t d2
    s, _ = np.linalg.solve(np.column_stack([d1, -np.asarray(d2)]), np.asarray(p2) - p1)
    return p1 + s * d1


@dataclass(frozen=True, eq=False)
class Scaffold:
    rectangle: np.ndarray
    rhombus: np.ndarray
    similar_ellipse: EllipseParams


def scaffold(e: EllipseParams) -> Scaffold:
    """Bounding rectangle and tangent rhombus, plus the ellipse through their 8 corners.

    The rhombus is built from the tangent lines at the eccentrix chord
    endpoints, intersected pairwise; its diagonals fall on the axes.
    """
    a, b = e.a, e.b
    rectangle = e.to_world(np.array([[a, b], [-a, b], [-a, -b], [a, -b]]))

    conic = e.conic()
    chords = conjugate_diameter_chords(e)
    ends = chords.reshape(4, 2)
    order = np.argsort(np.arctan2(*(e.to_local(ends)[:, ::-1].T)))
    ends = ends[order]
    grads = conic.gradient(ends)
    tangents = np.column_stack([-grads[:, 1], grads[:, 0]])
    corners = [_intersect(ends[k], tangents[k], ends[(k + 1) % 4], tangents[(k + 1) % 4])
               for k in range(4)]
    rhombus = np.array(corners)

    similar = EllipseParams(e.center, math.sqrt(2) * a, math.sqrt(2) * b, e.angle)
    return Scaffold(rectangle, rhombus, similar)


@dataclass(frozen=True, eq=False)
class Hyperbola:
    conic: ConicCoeffs
    slopes: tuple[float, float]


def hyperbola_from_line_pair(lines: LinePair, k: float) -> Hyperbola:
    """Locus d(P, l1)^2 - d(P, l2)^2 = k, with its asymptote slopes.

    The asymptotes are always perpendicular.  When v12^2 = v22^2 the slope
    quadratic degenerates and the asymptotes are the horizontal and vertical
    lines through the common point; the vertical slope is reported as inf.
    Opposite signs of k give the conjugate hyperbola with the same asymptotes.
    """
    k = float(k)
    if k == 0 or not math.isfinite(k):
        raise GeometryError(f"k must be a nonzero real, got {k}")
    (v11, v12), (v21, v22) = lines.normals
    A = (v11 - v21) * (v11 + v21)
    B = (v12 - v22) * (v12 + v22)
    C = v11 * v12 - v21 * v22
    conic = ConicCoeffs(A, B, C, 0.0, 0.0, -k)
    if lines.point.any():
        conic = conic.translated(lines.point)

    if abs(B) > EPS_INDEP:
        # B m^2 + 2C m + A = 0, roots in the cancellation-free form
        disc = C * C - A * B
        q = -(C + math.copysign(math.sqrt(max(disc, 0.0)), C))
        slopes = (q / B, A / q) if q != 0 else (math.sqrt(-A / B), -math.sqrt(-A / B))
    else:
        slopes = (0.0, INFINITY)
    return Hyperbola(conic, tuple(sorted(slopes)))
