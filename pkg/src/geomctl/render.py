"""CSV and SVG output for families of concentric metric balls.

SVG coordinates are world coordinates on a 6-decimal grid inside a
``scale(1,-1)`` group, so y points up and the numbers in each path can be
read back and checked against the metric directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .balls import (
    BallKind,
    BallSpec,
    ball_boundary_points,
    common_points,
    euclidean_circle_conic,
    maximum_circle,
    taxicab_circle,
)
from .conics import EllipseParams, ellipse_from_conic
from .metric import distances

DEFAULT_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                  "#8c564b", "#e377c2", "#17becf")


@dataclass(frozen=True)
class RenderStyle:
    width: int = 600
    height: int = 600
    margin: float = 0.10
    stroke_width: float = 1.5
    colors: tuple[str, ...] = DEFAULT_COLORS
    annotate: bool = False
    decimals: int = 6

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("render size must be positive")
        if not 1 <= self.decimals <= 15:
            raise ValueError("decimals must be in 1..15")
        if self.margin < 0 or self.stroke_width <= 0:
            raise ValueError("margin must be >= 0 and stroke width > 0")


@dataclass(frozen=True, eq=False)
class BallCurve:
    """One rendered boundary, either exact or sampled."""

    spec: BallSpec
    points: np.ndarray
    ellipse: EllipseParams | None = None
    closed: bool = field(default=True)

    @property
    def exponent(self) -> float:
        return self.spec.exponent

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        if self.ellipse is not None:
            e = self.ellipse
            c, s = math.cos(e.angle), math.sin(e.angle)
            half = np.array([math.hypot(e.a * c, e.b * s), math.hypot(e.a * s, e.b * c)])
            return e.center - half, e.center + half
        return self.points.min(axis=0), self.points.max(axis=0)


def format_p(p: float) -> str:
    return "inf" if math.isinf(p) else f"{p:g}"


def parse_p_list(text: str) -> list[float]:
    out = []
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        p = math.inf if token in ("inf", "infinity", "∞") else float(token)
        if not p > 0:
            raise ValueError(f"exponent must be > 0, got {token!r}")
        out.append(p)
    if not out:
        raise ValueError("empty exponent list")
    return out


def ball_curves(base: BallSpec, exponents: Iterable[float], samples: int,
                exact: bool = True) -> list[BallCurve]:
    """Boundaries of ``base`` for each exponent.

    With ``exact`` set, p = 1 and p = inf give their four vertices and
    p = 2 its ellipse (with ``samples`` points on it); every other exponent
    is sampled at equally spaced angles.
    """
    curves = []
    for p in exponents:
        spec = base.with_exponent(p)
        kind = spec.kind
        if exact and kind is BallKind.TAXICAB:
            curves.append(BallCurve(spec, taxicab_circle(spec).vertices))
        elif exact and kind is BallKind.MAXIMUM:
            curves.append(BallCurve(spec, maximum_circle(spec).vertices))
        elif exact and kind is BallKind.EUCLIDEAN:
            ellipse = ellipse_from_conic(euclidean_circle_conic(spec))
            curves.append(BallCurve(spec, ball_boundary_points(spec, samples).points, ellipse))
        else:
            curves.append(BallCurve(spec, ball_boundary_points(spec, samples).points))
    return curves


def _num(x: float, decimals: int = 6) -> str:
    s = f"{x:.{decimals}f}"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def csv_text(curves: Sequence[BallCurve]) -> str:
    """``x,y`` rows for a single curve; a leading ``p`` column for several."""
    lines = []
    many = len(curves) > 1
    lines.append("p,x,y" if many else "x,y")
    for curve in curves:
        tag = format_p(curve.exponent) + "," if many else ""
        for x, y in curve.points:
            lines.append(f"{tag}{float(x)!r},{float(y)!r}")
    return "\n".join(lines) + "\n"


def _viewport(curves: Sequence[BallCurve], margin: float) -> tuple[float, float, float, float]:
    lows, highs = zip(*(c.bounds() for c in curves))
    lo = np.min(lows, axis=0)
    hi = np.max(highs, axis=0)
    span = hi - lo
    pad = margin * span
    lo, hi = lo - pad, hi + pad
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


SNAP_REACH = 2  # grid steps searched on each side when snapping


def snap_to_grid(spec: BallSpec, points: np.ndarray, decimals: int = 6) -> np.ndarray:
    """Round ``points`` to ``decimals`` places, choosing the nearby grid point
    whose distance from the center is closest to the radius.

    Plain rounding can miss the level set by several grid steps when the
    distance is steep (p < 1 near the frame lines); searching a small
    neighbourhood of grid points keeps every written point on the ball.
    """
    scale = 10.0 ** decimals
    base = np.round(np.asarray(points, dtype=float) * scale)
    steps = np.arange(-SNAP_REACH, SNAP_REACH + 1, dtype=float)
    offsets = np.stack(np.meshgrid(steps, steps, indexing="ij"), axis=-1).reshape(-1, 2)
    # the unshifted candidate comes first so exact ties keep plain rounding
    offsets = offsets[np.argsort(np.abs(offsets).sum(axis=1), kind="stable")]
    cand = (base[:, None, :] + offsets[None, :, :]) / scale
    flat = cand.reshape(-1, 2)
    d = distances(spec.metric, np.broadcast_to(spec.center, flat.shape), flat)
    err = np.abs(d - spec.radius).reshape(len(base), len(offsets))
    return cand[np.arange(len(base)), np.argmin(err, axis=1)]


def _path_d(curve: BallCurve, dec: int) -> str:
    def xy(p):
        return f"{_num(p[0], dec)} {_num(p[1], dec)}"

    if curve.ellipse is not None:
        e = curve.ellipse
        start, end = snap_to_grid(curve.spec, e.points(np.array([0.0, math.pi])), dec)
        arc = f"A {_num(e.a, dec)} {_num(e.b, dec)} {_num(math.degrees(e.angle), dec)} 1 1"
        return f"M {xy(start)} {arc} {xy(end)} {arc} {xy(start)} Z"
    pts = snap_to_grid(curve.spec, curve.points, dec)
    body = " ".join(f"L {xy(p)}" for p in pts[1:])
    return f"M {xy(pts[0])} {body} Z"


def _clip_line(point, direction, box) -> tuple[np.ndarray, np.ndarray]:
    xmin, ymin, xmax, ymax = box
    reach = math.hypot(xmax - xmin, ymax - ymin)
    return point - reach * direction, point + reach * direction


def svg_text(curves: Sequence[BallCurve], style: RenderStyle = RenderStyle()) -> str:
    dec = style.decimals
    box = _viewport(curves, style.margin)
    xmin, ymin, xmax, ymax = box
    w, h = xmax - xmin, ymax - ymin
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.width}" height="{style.height}" '
        f'viewBox="{_num(xmin, dec)} {_num(-ymax, dec)} {_num(w, dec)} {_num(h, dec)}">',
        '<g transform="scale(1,-1)" fill="none" stroke-linejoin="round">',
    ]
    for i, curve in enumerate(curves):
        color = style.colors[i % len(style.colors)]
        tag = format_p(curve.exponent)
        out.append(
            f'<path id="ball-p{tag}" data-p="{tag}" stroke="{color}" '
            f'stroke-width="{style.stroke_width:g}" vector-effect="non-scaling-stroke" '
            f'd="{_path_d(curve, dec)}"/>')
    if style.annotate and curves:
        base = curves[0].spec
        dirs = base.frame.directions
        dot = 0.006 * max(w, h)
        for name, d in zip(("l1", "l2"), dirs):
            p0, p1 = _clip_line(base.center, d, box)
            out.append(
                f'<line class="frame-line" id="{name}" x1="{_num(p0[0], dec)}" y1="{_num(p0[1], dec)}" '
                f'x2="{_num(p1[0], dec)}" y2="{_num(p1[1], dec)}" stroke="#777777" '
                f'stroke-width="0.75" stroke-dasharray="4 3" vector-effect="non-scaling-stroke"/>')
        for q in common_points(base):
            out.append(f'<circle class="q-point" cx="{_num(q[0], dec)}" cy="{_num(q[1], dec)}" '
                       f'r="{_num(dot, dec)}" fill="#000000" stroke="none"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def parse_svg_paths(text: str) -> dict[str, np.ndarray]:
    """Read back the explicit coordinates of each ``ball-p*`` path.

    Arc commands contribute their endpoints only.
    """
    import re
    import xml.etree.ElementTree as ET

    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    out = {}
    for path in root.iter(f"{ns}path"):
        d = path.get("d", "")
        pts = []
        for cmd, args in re.findall(r"([MLAZ])([^MLAZ]*)", d):
            nums = [float(t) for t in args.split()]
            if cmd in "ML":
                pts.append(nums[:2])
            elif cmd == "A":
                pts.append(nums[5:7])
        out[path.get("data-p")] = np.array(pts)
    return out
