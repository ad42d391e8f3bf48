"""Command-line front end for the ``geomctl`` library.

Exit codes: 0 success, 1 a verification check failed, 2 malformed input,
3 a frame with a zero, non-unit or dependent vector.

Negative coordinates must be glued to their flag (``--center=-1,2``) or
placed after ``--`` when positional.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .balls import BallSpec, Frame2, euclidean_circle_conic
from .conics import (
    EccentrixForm,
    EllipseParams,
    LinePair,
    RectangleSpec,
    RhombusSpec,
    ball_from_ellipse,
    eccentric_radius,
    eccentricity,
    eccentrix_form_from_ellipse,
    ellipse_from_conic,
    ellipse_from_eccentrix_form,
    maximum_ball_from_rhombus,
    taxicab_ball_from_rectangle,
)
from .errors import DependentFrameError, GeometryError, NotUnitError, ZeroVectorError
from .metric import MetricSpec, distance, validate_frame
from .render import RenderStyle, ball_curves, csv_text, parse_p_list, svg_text
from .verify import SUITES, SampleConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_FRAME = 0, 1, 2, 3
CSV_MIN_SAMPLES = 8
CONVERSIONS = ("ellipse2ball", "ball2ellipse", "rect2taxi", "rhomb2max",
               "ellipse2eccx", "eccx2ellipse")


class InputError(ValueError):
    """Malformed command-line or spec-file input."""


def parse_exponent(value: Any) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
        try:
            value = float(value)
        except ValueError:
            raise InputError(f"bad exponent {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"bad exponent {value!r}")
    return float(value)


def parse_vector(text: str, n: int | None = None) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise InputError(f"expected comma-separated reals, got {text!r}") from None
    if n is not None and v.size != n:
        raise InputError(f"expected {n} components, got {text!r}")
    if not np.all(np.isfinite(v)):
        raise InputError(f"non-finite component in {text!r}")
    return v


def spec_from_document(doc: dict) -> MetricSpec:
    """Build a MetricSpec from the JSON spec document."""
    if not isinstance(doc, dict):
        raise InputError("spec document must be a JSON object")
    unknown = set(doc) - {"dimension", "exponent", "vectors", "weights", "normalize"}
    if unknown:
        raise InputError(f"unknown spec keys: {sorted(unknown)}")
    try:
        vectors = np.array(doc["vectors"], dtype=float)
        weights = np.array(doc.get("weights", [1.0] * len(doc["vectors"])), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad spec document: {exc}") from None
    n = doc.get("dimension", vectors.shape[0] if vectors.ndim else 0)
    if not isinstance(n, int) or vectors.shape != (n, n):
        raise InputError(f"vectors must be a {n} x {n} list of rows")
    frame = validate_frame(vectors, normalize=bool(doc.get("normalize", False)))
    return MetricSpec(frame, weights, parse_exponent(doc.get("exponent", 2)))


def load_spec(path: str | None, dimension: int = 2) -> MetricSpec:
    if path is None:
        return MetricSpec.standard(dimension)
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read spec file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"spec file is not valid JSON: {exc}") from None
    return spec_from_document(doc)


def _ball_base(spec: MetricSpec, center: str, radius: float) -> BallSpec:
    if spec.n != 2:
        raise InputError("ball rendering needs a 2-D spec")
    return BallSpec(Frame2.from_frame(spec.frame), tuple(spec.weights),
                    parse_vector(center, 2), radius, spec.exponent)


def _g15(x: float) -> float:
    return float(f"{x:.15g}") + 0.0  # folds -0.0 into 0.0


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _g15(float(obj))
    return obj


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_dist(args) -> int:
    spec = load_spec(args.spec)
    if args.p is not None:
        spec = spec.with_exponent(parse_exponent(args.p))
    x = parse_vector(args.x, spec.n)
    y = parse_vector(args.y, spec.n)
    print(f"{distance(spec, x, y):#.15g}")
    return EXIT_OK


def cmd_ball(args) -> int:
    spec = load_spec(args.spec)
    base = _ball_base(spec, args.center, args.radius)
    exponents = parse_p_list(args.p) if args.p else [spec.exponent]
    if args.format == "csv" and args.samples < CSV_MIN_SAMPLES:
        raise InputError(f"csv output needs --samples >= {CSV_MIN_SAMPLES}")
    curves = ball_curves(base, exponents, args.samples, exact=args.format != "csv")
    style = RenderStyle(annotate=args.annotate, decimals=args.decimals)
    if args.format == "png" or args.figure:
        from .plotting import ball_figure, save_figure

        target = args.out if args.format == "png" else args.figure
        if target in (None, "-"):
            raise InputError("png output needs a file path")
        save_figure(ball_figure(curves, style), target)
    if args.format == "csv":
        _emit(csv_text(curves), args.out)
    elif args.format == "svg":
        _emit(svg_text(curves, style), args.out)
    return EXIT_OK


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.kind} needs --{' --'.join(missing)}")
    return [getattr(args, n) for n in names]


def _frame_doc(frame: Frame2) -> list:
    return [frame.v1, frame.v2]


def _ellipse_doc(e: EllipseParams) -> dict:
    return {"center": e.center, "a": e.a, "b": e.b, "angle": e.angle,
            "eccentricity": eccentricity(e), "eccentric_radius": eccentric_radius(e)}


def convert(kind: str, args) -> dict:
    center = parse_vector(args.center, 2)
    angle = args.angle
    if kind == "ellipse2ball":
        a, b = _need(args, "a", "b")
        frame, r = ball_from_ellipse(EllipseParams(center, a, b, angle))
        return {"frame": _frame_doc(frame), "weights": [1.0, 1.0],
                "center": center, "radius": r, "exponent": 2.0}
    if kind == "ball2ellipse":
        base = _ball_base(load_spec(args.spec), args.center, args.radius)
        e = ellipse_from_conic(euclidean_circle_conic(base.with_exponent(2.0)))
        return _ellipse_doc(e)
    if kind == "rect2taxi":
        a, b = _need(args, "a", "b")
        frame, r = taxicab_ball_from_rectangle(RectangleSpec(center, (a, b), angle))
        return {"frame": _frame_doc(frame), "weights": [1.0, 1.0],
                "center": center, "radius": r, "exponent": 1.0}
    if kind == "rhomb2max":
        e, f = _need(args, "a", "b")
        frame, r = maximum_ball_from_rhombus(RhombusSpec(center, (e, f), angle))
        return {"frame": _frame_doc(frame), "weights": [1.0, 1.0],
                "center": center, "radius": r, "exponent": "inf"}
    if kind == "ellipse2eccx":
        a, b = _need(args, "a", "b")
        form = eccentrix_form_from_ellipse(EllipseParams(center, a, b, angle))
        d1, d2 = form.lines.dir1, form.lines.dir2
        return {"point": form.lines.point, "directions": [d1, d2],
                "normals": list(form.lines.normals), "constant": form.constant}
    if kind == "eccx2ellipse":
        d1, d2, c = _need(args, "dir1", "dir2", "constant")
        form = EccentrixForm(LinePair(center, parse_vector(d1, 2), parse_vector(d2, 2)), c)
        return _ellipse_doc(ellipse_from_eccentrix_form(form))
    raise InputError(f"unknown conversion {kind!r}")


def cmd_convert(args) -> int:
    doc = {"kind": args.kind, **convert(args.kind, args)}
    print(json.dumps(_jsonable(doc), indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = load_spec(args.spec, args.dimension)
    if args.p is not None:
        spec = spec.with_exponent(parse_exponent(args.p))
    cfg = SampleConfig(seed=args.seed, count=args.count, dimension=spec.n)
    reports = run_suite(args.suite, spec, cfg, workers=args.workers)
    _emit("".join(r.line() + "\n" for r in reports), args.out)
    if args.figure:
        from .plotting import report_figure, save_figure

        save_figure(report_figure(reports), args.figure)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geomctl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_arg(p):
        p.add_argument("--spec", metavar="FILE", help="JSON spec document (default: identity frame)")

    p = sub.add_parser("dist", help="distance between two points")
    spec_arg(p)
    p.add_argument("--p", help="override the spec exponent")
    p.add_argument("x", help="first point, e.g. 0,0")
    p.add_argument("y", help="second point")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("ball", help="render ball boundaries for one or more exponents")
    spec_arg(p)
    p.add_argument("--center", default="0,0")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--p", help="comma-separated exponents, 'inf' allowed")
    p.add_argument("--format", choices=("csv", "svg", "png"), default="svg")
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.add_argument("--annotate", action="store_true", help="draw the frame lines with their common points")
    p.add_argument("--figure", metavar="PNG", help="also write a matplotlib figure")
    p.add_argument("--decimals", type=int, default=6, help="SVG coordinate decimals")
    p.add_argument("--seed", type=int, default=0, help="accepted for symmetry; rendering is not random")
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("convert", help="convert between conic shapes and metric balls")
    p.add_argument("kind", choices=CONVERSIONS)
    spec_arg(p)
    p.add_argument("--a", type=float, help="first half-extent of the input shape")
    p.add_argument("--b", type=float, help="second half-extent of the input shape")
    p.add_argument("--angle", type=float, default=0.0, help="orientation in radians")
    p.add_argument("--center", default="0,0")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--dir1", help="direction of the first line")
    p.add_argument("--dir2", help="direction of the second line")
    p.add_argument("--constant", type=float)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("verify", help="run property checks and print PROPERTY lines")
    p.add_argument("suite", choices=SUITES + ("all",))
    spec_arg(p)
    p.add_argument("--p", help="override the spec exponent")
    p.add_argument("--dimension", type=int, default=2, help="dimension when no spec is given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-")
    p.add_argument("--figure", metavar="PNG", help="also plot the report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DependentFrameError, NotUnitError, ZeroVectorError) as exc:
        print(f"geomctl: invalid frame: {exc}", file=sys.stderr)
        return EXIT_FRAME
    except (GeometryError, ValueError, OSError) as exc:
        print(f"geomctl: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
