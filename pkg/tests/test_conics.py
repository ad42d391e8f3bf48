import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geomctl.balls import Frame2, cross2, rotation
from geomctl.conics import (
    EccentrixForm,
    EllipseParams,
    LinePair,
    RectangleSpec,
    RhombusSpec,
    ball_from_ellipse,
    conjugate_diameter_chords,
    eccentric_radius,
    eccentricity,
    eccentricity_from_angle,
    eccentrix_form_from_ellipse,
    ellipse_from_ball,
    ellipse_from_eccentrix_form,
    hyperbola_from_line_pair,
    maximum_ball_from_rhombus,
    scaffold,
    taxicab_ball_from_rectangle,
)
from geomctl.errors import DegenerateFrameError, DependentFrameError, GeometryError

from conftest import OBLIQUE_ROWS

# a = 1/sqrt(1 - c), b = 1/sqrt(1 + c) at c = 8/sqrt(260), 50-digit mpmath
OBLIQUE_A = 1.4087846187057560363
OBLIQUE_B = 0.81754946186018219271


def frame_at(cos_theta):
    t = math.acos(cos_theta)
    return Frame2((1.0, 0.0), (math.cos(t), math.sin(t)))


def test_perpendicular_frame_gives_circle():
    e = ellipse_from_ball(Frame2.identity(), (0, 0), 1.0)
    assert e.a == pytest.approx(1.0) and e.b == pytest.approx(1.0)
    assert e.is_circle
    with pytest.raises(DegenerateFrameError):
        ellipse_from_ball(Frame2.identity(), (0, 0), 1.0, strict=True)


def test_ellipse_from_ball_cos_06():
    e = ellipse_from_ball(frame_at(0.6), (0, 0), 1.0)
    assert e.a == pytest.approx(1 / math.sqrt(0.4), rel=1e-14)
    assert e.b == pytest.approx(1 / math.sqrt(1.6), rel=1e-14)
    _, r = ball_from_ellipse(e)
    assert r == pytest.approx(1.0, rel=1e-14)


def test_ellipse_from_ball_oblique():
    f = Frame2.from_rows(OBLIQUE_ROWS, normalize=True)
    e = ellipse_from_ball(f, (0, 0), 1.0)
    assert e.a == pytest.approx(OBLIQUE_A, rel=1e-14)
    assert e.b == pytest.approx(OBLIQUE_B, rel=1e-14)
    f2, r = ball_from_ellipse(e)
    assert r == pytest.approx(1.0, rel=1e-14)
    assert LinePair.from_frame(f).same_lines(LinePair.from_frame(f2))


def test_major_axis_bisects_non_obtuse_angle():
    f = Frame2.from_rows(OBLIQUE_ROWS, normalize=True)
    e = ellipse_from_ball(f, (0, 0), 1.0)
    d1, d2 = f.directions
    major = e.axes[:, 0]
    # equal angles to both lines, and each under 45 degrees
    c1, c2 = abs(major @ d1), abs(major @ d2)
    assert c1 == pytest.approx(c2, rel=1e-14)
    assert c1 > math.sqrt(0.5)


def test_ellipse_points_satisfy_two_line_definition():
    f = Frame2.from_rows(OBLIQUE_ROWS, normalize=True)
    e = ellipse_from_ball(f, (1.0, -2.0), 1.7)
    lines = LinePair.from_frame(f, (1.0, -2.0))
    pts = e.points(np.linspace(0, 2 * np.pi, 100))
    s = (lines.distances(pts) ** 2).sum(axis=1)
    assert np.abs(s - 1.7 ** 2).max() < 1e-12


def test_ball_from_ellipse_2_1():
    e = EllipseParams((0, 0), 2.0, 1.0)
    frame, r = ball_from_ellipse(e)
    assert r == pytest.approx(2 * math.sqrt(2) / math.sqrt(5), rel=1e-15)
    expected = LinePair((0, 0), (2.0, 1.0), (2.0, -1.0))
    assert LinePair.from_frame(frame).same_lines(expected, 1e-14)


def test_circle_eccentrices_at_45_degrees():
    frame, r = ball_from_ellipse(EllipseParams((0, 0), 1.0, 1.0, 0.3))
    assert r == pytest.approx(1.0)
    assert frame.cos_theta < 1e-15
    d1, _ = frame.directions
    assert abs(abs(d1 @ rotation(0.3)[:, 0]) - math.sqrt(0.5)) < 1e-15


@pytest.mark.parametrize("a, b, radius", [(1, 1, math.sqrt(2)), (3, 4, 4.8)])
def test_rectangle_to_taxicab(a, b, radius):
    rect = RectangleSpec((0.5, -1.0), (a, b), 0.4)
    frame, r = taxicab_ball_from_rectangle(rect)
    assert r == pytest.approx(radius, rel=1e-15)
    # sum of distances to the two through-center lines is constant on the boundary
    lines = LinePair.from_frame(frame, rect.center)
    c = rect.corners()
    t = np.linspace(0, 1, 25)[:, None]
    boundary = np.vstack([c[k] + t * (c[(k + 1) % 4] - c[k]) for k in range(4)])
    assert np.abs(lines.distances(boundary).sum(axis=1) - r).max() < 1e-12


def test_rectangle_rotation_rotates_frame():
    f0, r0 = taxicab_ball_from_rectangle(RectangleSpec((0, 0), (3, 4), 0.0))
    f1, r1 = taxicab_ball_from_rectangle(RectangleSpec((7, 1), (3, 4), 0.9))
    assert r0 == pytest.approx(r1, rel=1e-14)
    rot = rotation(0.9)
    np.testing.assert_allclose(rot @ f0.v1, f1.v1, atol=1e-14)
    np.testing.assert_allclose(rot @ f0.v2, f1.v2, atol=1e-14)


@pytest.mark.parametrize("e, f, radius", [(1, 1, 1 / math.sqrt(2)), (3, 4, 2.4)])
def test_rhombus_to_maximum(e, f, radius):
    rh = RhombusSpec((1.0, 2.0), (e, f), 1.1)
    frame, r = maximum_ball_from_rhombus(rh)
    assert r == pytest.approx(radius, rel=1e-15)
    lines = LinePair(rh.center, *frame.directions)
    c = rh.corners()
    t = np.linspace(0, 1, 25)[:, None]
    boundary = np.vstack([c[k] + t * (c[(k + 1) % 4] - c[k]) for k in range(4)])
    assert np.abs(lines.distances(boundary).max(axis=1) - r).max() < 1e-12
    # at a vertex both distances equal the radius
    np.testing.assert_allclose(lines.distances(c[0]), [r, r], rtol=1e-13)


@pytest.mark.parametrize("a, b, ecc", [
    (1.0, 1.0, 0.0), (math.sqrt(2), 1.0, 1 / math.sqrt(2)), (2.0, 1.0, math.sqrt(3) / 2),
])
def test_eccentricity(a, b, ecc):
    e = EllipseParams((0, 0), a, b)
    assert eccentricity(e) == pytest.approx(ecc, abs=1e-15)
    frame, _ = ball_from_ellipse(e)
    # at a = b the square root turns a 1e-17 rounding of cos(theta) into ~1e-8
    tol = 1e-12 if a != b else 1e-7
    assert eccentricity_from_angle(frame.theta) == pytest.approx(ecc, abs=tol)
    assert eccentricity_from_angle(2 * math.atan(b / a)) == pytest.approx(ecc, abs=tol)


def test_eccentric_radius():
    assert eccentric_radius(EllipseParams((0, 0), 1, 1)) == pytest.approx(1.0)
    e = EllipseParams((0, 0), 2, 1)
    R = eccentric_radius(e)
    frame, r = ball_from_ellipse(e)
    assert R == pytest.approx(math.sqrt(2.5), rel=1e-15)
    assert R * r == pytest.approx(2.0, rel=1e-14)
    assert math.sin(frame.theta) == pytest.approx(r / R, rel=1e-14)


def test_chords_for_2_1():
    e = EllipseParams((0, 0), 2, 1)
    chords = conjugate_diameter_chords(e)
    s1, s2 = chords[0, 0], chords[1, 0]
    assert np.linalg.norm(s1) == pytest.approx(math.sqrt(2.5), rel=1e-14)
    assert np.linalg.norm(s2) == pytest.approx(math.sqrt(2.5), rel=1e-14)
    assert s1 @ s1 + s2 @ s2 == pytest.approx(5.0, rel=1e-14)
    assert abs(cross2(s1, s2)) == pytest.approx(2.0, rel=1e-14)
    np.testing.assert_allclose(chords[:, 1], -chords[:, 0], atol=1e-14)


def test_chords_of_circle():
    chords = conjugate_diameter_chords(EllipseParams((0, 0), 1.5, 1.5))
    s1, s2 = chords[0, 0], chords[1, 0]
    assert np.linalg.norm(s1) == pytest.approx(1.5) and np.linalg.norm(s2) == pytest.approx(1.5)
    assert abs(s1 @ s2) < 1e-14


def test_scaffold_2_1():
    e = EllipseParams((1.0, -1.0), 2, 1, 0.3)
    sc = scaffold(e)
    rh = e.to_local(sc.rhombus)
    diag = sorted([np.linalg.norm(rh[0] - rh[2]), np.linalg.norm(rh[1] - rh[3])])
    assert diag == pytest.approx([2 * math.sqrt(2), 4 * math.sqrt(2)], rel=1e-13)
    sides = np.linalg.norm(np.roll(rh, -1, axis=0) - rh, axis=1)
    assert sides == pytest.approx([2 * eccentric_radius(e)] * 4, rel=1e-13)
    rect = sc.rectangle
    assert np.linalg.norm(rect[0] - rect[2]) == pytest.approx(2 * math.sqrt(5), rel=1e-14)
    assert sc.similar_ellipse.a == pytest.approx(2 * math.sqrt(2))
    verts = np.vstack([sc.rectangle, sc.rhombus])
    assert np.abs(sc.similar_ellipse.implicit(verts)).max() < 1e-13
    # rectangle diagonals lie on the eccentrices
    lines = eccentrix_form_from_ellipse(e).lines
    assert lines.distances(rect).min(axis=1).max() < 1e-13


def test_scaffold_circle_is_rotated_square():
    sc = scaffold(EllipseParams((0, 0), 1, 1))
    rh = sc.rhombus
    sides = np.linalg.norm(np.roll(rh, -1, axis=0) - rh, axis=1)
    assert sides == pytest.approx([2.0] * 4, rel=1e-14)
    # corners on the axes means the square is turned by 45 degrees
    assert np.abs(rh).min(axis=1).max() < 1e-14


def test_hyperbola_identity_frame():
    h = hyperbola_from_line_pair(LinePair.from_frame(Frame2.identity()), 1.0)
    c = h.conic
    assert (c.A, c.B, c.C, c.F) == (1.0, -1.0, 0.0, -1.0)
    assert h.slopes == pytest.approx((-1.0, 1.0))


def test_hyperbola_oblique():
    f = Frame2.from_rows(OBLIQUE_ROWS, normalize=True)
    h = hyperbola_from_line_pair(LinePair.from_frame(f), 1.0)
    assert h.conic.delta == pytest.approx(-f.tau ** 2, rel=1e-14)
    assert h.conic.delta < 0 and h.conic.Delta != 0
    assert h.slopes[0] * h.slopes[1] == pytest.approx(-1.0, rel=1e-14)


def test_hyperbola_degenerate_slopes():
    s = math.sqrt(0.5)
    f = Frame2((s, s), (-s, s))
    h = hyperbola_from_line_pair(LinePair.from_frame(f), 2.0)
    assert h.slopes == (0.0, math.inf)


def test_conjugate_hyperbolas_share_asymptotes():
    lines = LinePair.from_frame(Frame2.from_rows(OBLIQUE_ROWS, normalize=True))
    assert hyperbola_from_line_pair(lines, 1.0).slopes == \
        hyperbola_from_line_pair(lines, -1.0).slopes
    with pytest.raises(GeometryError):
        hyperbola_from_line_pair(lines, 0.0)


def test_eccentrices_are_conjugate_hyperbola_asymptotes():
    # x^2/a^2 - y^2/b^2 = +-1 has asymptotes b x -+ a y = 0
    e = EllipseParams((0, 0), 3.0, 1.2)
    lines = eccentrix_form_from_ellipse(e).lines
    slopes = sorted(d[1] / d[0] for d in (lines.dir1, lines.dir2))
    assert slopes == pytest.approx([-1.2 / 3.0, 1.2 / 3.0], rel=1e-15)


def test_eccentrix_forms():
    assert eccentrix_form_from_ellipse(EllipseParams((0, 0), 1, 1)).constant == pytest.approx(1.0)
    assert eccentrix_form_from_ellipse(EllipseParams((0, 0), 3, 4)).constant == pytest.approx(11.52)
    form = eccentrix_form_from_ellipse(EllipseParams((0, 0), 2, 1))
    assert form.constant == pytest.approx(1.6, rel=1e-15)
    # constant is the squared distance from a chord endpoint to the other line
    q1 = conjugate_diameter_chords(EllipseParams((0, 0), 2, 1))[0, 0]
    assert form.lines.distances(q1)[1] ** 2 == pytest.approx(1.6, rel=1e-14)


def test_ellipse_from_eccentrix_form():
    circ = ellipse_from_eccentrix_form(EccentrixForm(LinePair((0, 0), (1, 0), (0, 1)), 1.0))
    assert circ.a == pytest.approx(1.0) and circ.b == pytest.approx(1.0)
    t = math.acos(0.6)
    form = EccentrixForm(LinePair((2, 3), (1, 0), (math.cos(t), math.sin(t))), 4.0)
    e = ellipse_from_eccentrix_form(form)
    assert e.a == pytest.approx(2 / math.sqrt(0.4), rel=1e-14)
    assert e.b == pytest.approx(2 / math.sqrt(1.6), rel=1e-14)
    pts = e.points(np.linspace(0, 2 * np.pi, 100))
    assert np.abs(form.residual(pts)).max() < 1e-9 * 4.0
    assert np.abs(form.residual(e.center + 1.01 * (pts - e.center))).min() > 1e-4 * 4.0
    back = eccentrix_form_from_ellipse(e)
    assert back.constant == pytest.approx(4.0, rel=1e-14)
    assert back.lines.same_lines(form.lines)


def test_ellipse_normalizes_axes():
    e = EllipseParams((0, 0), 1.0, 2.0, 0.1)
    assert (e.a, e.b) == (2.0, 1.0)
    assert e.angle == pytest.approx(0.1 + math.pi / 2)
    with pytest.raises(GeometryError):
        EllipseParams((0, 0), 0.0, 1.0)


def test_parallel_lines_rejected():
    with pytest.raises(DependentFrameError):
        LinePair((0, 0), (1, 0), (-2, 0))


angles = st.floats(0.05, math.pi / 2)
rot = st.floats(0, 2 * math.pi)
radius = st.floats(0.1, 10)
axis = st.floats(0.1, 10)
aspect = st.floats(1.0, 50.0)


@given(rot, angles, st.sampled_from([-1.0, 1.0]), radius)
def test_frame_ellipse_frame_round_trip(phi, theta, sign, r):
    f = Frame2((math.cos(phi), math.sin(phi)),
               (math.cos(phi + sign * theta), math.sin(phi + sign * theta)))
    e = ellipse_from_ball(f, (0.5, 0.5), r)
    f2, r2 = ball_from_ellipse(e)
    assert r2 == pytest.approx(r, rel=1e-9)
    assert LinePair.from_frame(f, (0.5, 0.5)).same_lines(LinePair.from_frame(f2, e.center), 1e-9)


@given(axis, aspect, rot)
def test_ellipse_eccentrix_round_trip(b, k, angle):
    e = EllipseParams((1, 2), b * k, b, angle)
    e2 = ellipse_from_eccentrix_form(eccentrix_form_from_ellipse(e))
    assert e2.a == pytest.approx(e.a, rel=1e-9)
    assert e2.b == pytest.approx(e.b, rel=1e-9)
    if not e.is_circle:
        d = abs(e2.angle - e.angle)
        assert min(d, math.pi - d) < 1e-9


@given(axis, aspect, rot)
def test_ellipse_relations(b, k, angle):
    e = EllipseParams((0, 0), b * k, b, angle)
    a = e.a
    frame, r = ball_from_ellipse(e)
    th = frame.theta
    assert r * r == pytest.approx(2 * a * a * b * b / (a * a + b * b), rel=1e-12)
    assert b * (1 - 1e-12) <= r <= a * (1 + 1e-12)
    assert math.tan(th / 2) == pytest.approx(b / a, rel=1e-10)
    assert math.sin(th) == pytest.approx(r * r / (a * b), rel=1e-10)
    assert math.cos(th) == pytest.approx((a * a - b * b) / (a * a + b * b), abs=1e-12)
    assert eccentric_radius(e) * r == pytest.approx(a * b, rel=1e-12)


@given(axis, aspect, rot, st.floats(-5, 5), st.floats(-5, 5))
def test_rigid_motion_equivariance(b, k, angle, tx, ty):
    e0 = EllipseParams((0, 0), b * k, b, 0.0)
    e1 = EllipseParams((tx, ty), b * k, b, angle)
    f0, r0 = ball_from_ellipse(e0)
    f1, r1 = ball_from_ellipse(e1)
    assert r1 == pytest.approx(r0, rel=1e-10)
    moved = LinePair((tx, ty), *(rotation(angle) @ d for d in f0.directions))
    assert moved.same_lines(LinePair.from_frame(f1, (tx, ty)), 1e-10)


@given(axis, aspect, rot)
def test_apollonius(b, k, angle):
    e = EllipseParams((3, -1), b * k, b, angle)
    ch = conjugate_diameter_chords(e)
    s1, s2 = ch[0, 0] - e.center, ch[1, 0] - e.center
    assert s1 @ s1 + s2 @ s2 == pytest.approx(e.a ** 2 + e.b ** 2, rel=1e-10)
    assert abs(cross2(s1, s2)) == pytest.approx(e.a * e.b, rel=1e-10)
    R = eccentric_radius(e)
    assert np.linalg.norm(s1) == pytest.approx(R, rel=1e-10)


@given(rot, st.floats(1e-3, math.pi / 2), st.floats(0.1, 10))
def test_hyperbola_perpendicular_asymptotes(phi, theta, k):
    f = Frame2((math.cos(phi), math.sin(phi)), (math.cos(phi + theta), math.sin(phi + theta)))
    h = hyperbola_from_line_pair(LinePair.from_frame(f), k)
    assert h.conic.delta < 0
    m1, m2 = h.slopes
    if math.isinf(m2):
        assert m1 == 0.0
    else:
        assert m1 * m2 == pytest.approx(-1.0, abs=1e-10)
