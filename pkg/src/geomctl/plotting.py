"""Matplotlib figures for ball families and verification reports.

Figures are drawn on a bare ``Figure`` with an Agg canvas, so nothing here
touches pyplot's global state or needs a display.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib
import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .balls import common_points
from .render import BallCurve, RenderStyle, format_p
from .verify import PropertyReport

golden_mean = (math.sqrt(5) - 1.0) / 2.0
fig_width = 4.5

params = {
    "font.family": "sans-serif",
    "font.sans-serif": ["DejaVu Sans"],
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "svg.hashsalt": "geomctl",
    "figure.dpi": 100,
    "savefig.dpi": 150,
}


def _figure(size) -> Figure:
    fig = Figure(figsize=size)
    FigureCanvasAgg(fig)
    return fig


def ball_figure(curves: Sequence[BallCurve], style: RenderStyle = RenderStyle()) -> Figure:
    """Overlay of the given boundaries with a shared center, equal aspect."""
    with matplotlib.rc_context(params):
        fig = _figure((fig_width, fig_width))
        ax = fig.add_subplot(1, 1, 1)
        for i, curve in enumerate(curves):
            if curve.ellipse is not None:
                t = np.linspace(0.0, 2 * math.pi, 721)
                pts = curve.ellipse.points(t)
            else:
                pts = np.vstack([curve.points, curve.points[:1]])
            ax.plot(pts[:, 0], pts[:, 1], color=style.colors[i % len(style.colors)],
                    label=f"p = {format_p(curve.exponent)}")
        if style.annotate and curves:
            base = curves[0].spec
            lo, hi = np.min([c.bounds()[0] for c in curves], axis=0), \
                np.max([c.bounds()[1] for c in curves], axis=0)
            reach = float(np.hypot(*(hi - lo)))
            for name, d in zip(("$l_1$", "$l_2$"), base.frame.directions):
                seg = base.center + np.outer([-reach, reach], d)
                ax.plot(seg[:, 0], seg[:, 1], color="0.5", ls="--", lw=0.7, label=name)
            q = common_points(base)
            ax.plot(q[:, 0], q[:, 1], "k.", ms=5)
            pad = style.margin * (hi - lo)
            ax.set_xlim(lo[0] - pad[0], hi[0] + pad[0])
            ax.set_ylim(lo[1] - pad[1], hi[1] + pad[1])
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.legend(loc="upper right", frameon=False)
        fig.tight_layout()
    return fig


def report_figure(reports: Sequence[PropertyReport]) -> Figure:
    """Horizontal bars of log10(max_violation / tolerance) per property."""
    with matplotlib.rc_context(params):
        fig = _figure((fig_width * 1.4, max(2.0, 0.35 * len(reports) + 1.0)))
        ax = fig.add_subplot(1, 1, 1)
        names = [r.name for r in reports]
        tiny = 1e-300
        ratio = [math.log10(max(r.max_violation, tiny) / r.tolerance) for r in reports]
        ratio = [max(v, -20.0) for v in ratio]
        colors = ["#2ca02c" if r.passed else "#d62728" for r in reports]
        y = np.arange(len(reports))
        ax.barh(y, ratio, color=colors)
        ax.axvline(0.0, color="k", lw=0.8)
        ax.set_yticks(y, names)
        ax.invert_yaxis()
        ax.set_xlabel("log10(max violation / tolerance)")
        fig.tight_layout()
    return fig


def save_figure(fig: Figure, path: str | Path) -> Path:
    """Write ``fig``; the format follows the file suffix. Metadata is fixed."""
    path = Path(path)
    fmt = path.suffix.lstrip(".").lower() or "png"
    meta = {"png": {"Software": None}, "svg": {"Date": None},
            "pdf": {"CreationDate": None}}.get(fmt, {})
    with matplotlib.rc_context(params):
        fig.savefig(path, format=fmt, metadata=meta)
    return path
