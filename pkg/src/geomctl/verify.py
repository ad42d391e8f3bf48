"""Monte-Carlo and brute-force checks of the metric and conic properties.

Every random draw comes from a Philox stream keyed by (seed, batch index),
so a batch produces the same numbers whether batches run in order, out of
order or on worker threads.  Reductions across batches are max/first-hit
only, which keeps reports bit-identical for a given seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import balls, conics
from .balls import BallSpec, Frame2, Parallelogram4, Polyline
from .conics import EllipseParams
from .errors import DimensionMismatchError, NotAMetricError, UnsupportedExponentError
from .metric import INFINITY, Frame, MetricSpec, distances

BATCH = 8192
TRIANGLE_RTOL = 1e-9
ALGEBRA_RTOL = 1e-12
LINE_RATIO_RTOL = 1e-10
MEMBERSHIP_RTOL = 1e-9
WITNESS_ATOL = 1e-9


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    count: int = 10_000
    box_half_width: float = 10.0
    dimension: int = 2

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not self.box_half_width > 0:
            raise ValueError(f"box_half_width must be > 0, got {self.box_half_width}")
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")


Witness = tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class PropertyReport:
    name: str
    trials: int
    max_violation: float
    tolerance: float
    witness: Witness | None = None
    detail: str = ""
    parts: tuple[PropertyReport, ...] = field(default=(), compare=True)

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (f"PROPERTY {self.name} {status} max_violation={self.max_violation:.6e} "
                f"tolerance={self.tolerance:.1e} trials={self.trials}")
        if self.witness is not None:
            pts = ";".join(",".join(repr(c) for c in p) for p in self.witness)
            text += f" witness={pts}"
        if self.detail:
            text += f" {self.detail}"
        return text


def rng_for(seed: int, batch: int) -> np.random.Generator:
    key = np.array([seed % 2 ** 64, batch], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _batches(count: int) -> list[tuple[int, int]]:
    return [(i, min(BATCH, count - i * BATCH)) for i in range(-(-count // BATCH))]


@dataclass(frozen=True)
class _BatchResult:
    violation: float
    witness: Witness | None


def _as_witness(*points) -> Witness:
    return tuple(tuple(float(c) for c in p) for p in points)


def _run(cfg: SampleConfig, work: Callable[[np.random.Generator, int], dict[str, _BatchResult]],
         tolerance: float, workers: int = 1) -> dict[str, tuple[float, Witness | None]]:
    """Evaluate ``work`` per batch and reduce each named property.

    The reduction is the max violation plus the witness of the earliest
    failing batch, so it does not depend on evaluation order.
    """
    jobs = _batches(cfg.count)

    def one(job):
        index, size = job
        return work(rng_for(cfg.seed, index), size)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, jobs))
    else:
        results = [one(j) for j in jobs]
    out = {}
    for name in results[0]:
        worst = max(r[name].violation for r in results)
        witness = next((r[name].witness for r in results
                        if r[name].witness is not None and r[name].violation > tolerance), None)
        out[name] = (worst, witness)
    return out


def _worst(v: np.ndarray, tolerance: float, *points) -> _BatchResult:
    i = int(np.argmax(v))
    wit = _as_witness(*(p[i] for p in points)) if v[i] > tolerance else None
    return _BatchResult(float(v[i]), wit)


def _uniform(rng, cfg: SampleConfig, size: int) -> np.ndarray:
    w = cfg.box_half_width
    return rng.uniform(-w, w, size=(size, cfg.dimension))


def _check_dimension(spec: MetricSpec, cfg: SampleConfig) -> None:
    if spec.n != cfg.dimension:
        raise DimensionMismatchError(
            f"spec is {spec.n}-dimensional but sampling is {cfg.dimension}-dimensional")


def check_metric_axioms(spec: MetricSpec, cfg: SampleConfig, workers: int = 1) -> PropertyReport:
    """(M1) identity, (M2) symmetry and (M3) triangle inequality on random triples."""
    if not spec.is_metric:
        raise NotAMetricError(
            f"exponent {spec.exponent} < 1 is not a metric; use find_triangle_violation")
    _check_dimension(spec, cfg)

    def axioms(rng, size):
        x, y, z = (_uniform(rng, cfg, size) for _ in range(3))
        dxx = distances(spec, x, x)
        dxy = distances(spec, x, y)
        dyx = distances(spec, y, x)
        dxz = distances(spec, x, z)
        dzy = distances(spec, z, y)
        distinct = np.any(x != y, axis=1)
        m1 = np.where(dxx != 0, np.inf, 0.0) + np.where(distinct & (dxy <= 0), np.inf, 0.0)
        scale = np.maximum(np.maximum(dxy, dxz), dzy)
        safe = np.where(scale > 0, scale, 1.0)
        m2 = np.abs(dxy - dyx) / safe
        m3 = np.maximum(dxy - dxz - dzy, 0.0) / safe
        return {"M1": _worst(m1, TRIANGLE_RTOL, x, y),
                "M2": _worst(m2, TRIANGLE_RTOL, x, y),
                "M3": _worst(m3, TRIANGLE_RTOL, x, z, y)}

    results = _run(cfg, axioms, TRIANGLE_RTOL, workers)
    parts = [PropertyReport(name, cfg.count, worst, TRIANGLE_RTOL, wit)
             for name, (worst, wit) in results.items()]
    worst = max(p.max_violation for p in parts)
    witness = next((p.witness for p in parts if p.witness is not None), None)
    return PropertyReport("metric_axioms", cfg.count, worst, TRIANGLE_RTOL, witness,
                          detail=f"p={spec.exponent!r} n={spec.n}", parts=tuple(parts))


def _triangle_excess(spec: MetricSpec, x, z, y) -> np.ndarray:
    return distances(spec, x, y) - distances(spec, x, z) - distances(spec, z, y)


def find_triangle_violation(spec: MetricSpec, cfg: SampleConfig) -> PropertyReport:
    """Search for x, z, y with d(x, y) > d(x, z) + d(z, y) + 1e-9 when p < 1.

    The staircase x = 0, z = t e1, y = t (e1 + e2) is tried first, then
    random triples in batches until the first hit or ``cfg.count`` trials.
    Not finding a witness is reported (passed=True), never raised.
    """
    if not 0 < spec.exponent < 1:
        raise UnsupportedExponentError(
            f"triangle violations need 0 < p < 1, got {spec.exponent}")
    _check_dimension(spec, cfg)
    n = spec.n
    ts = np.array([1.0, 0.5, 2.0, 0.1, 5.0])
    e1 = np.eye(n)[0]
    e12 = e1 + np.eye(n)[1]
    x = np.zeros((len(ts), n))
    z = ts[:, None] * e1
    y = ts[:, None] * e12
    excess = _triangle_excess(spec, x, z, y)
    trials = 0
    for i in range(len(ts)):
        trials += 1
        if excess[i] > WITNESS_ATOL:
            return _witness_report(spec, (x[i], z[i], y[i]), float(excess[i]), trials)

    for index, size in _batches(cfg.count):
        rng = rng_for(cfg.seed, index)
        x, z, y = (_uniform(rng, cfg, size) for _ in range(3))
        excess = _triangle_excess(spec, x, z, y)
        hits = np.flatnonzero(excess > WITNESS_ATOL)
        if hits.size:
            i = int(hits[0])
            return _witness_report(spec, (x[i], z[i], y[i]), float(excess[i]), trials + i + 1)
        trials += size
    return PropertyReport("triangle_inequality", trials, 0.0, WITNESS_ATOL,
                          detail=f"p={spec.exponent!r} no witness found")


def _witness_report(spec, pts, excess, trials) -> PropertyReport:
    x, z, y = (np.asarray(p)[None, :] for p in pts)
    dxy = float(distances(spec, x, y)[0])
    dxz = float(distances(spec, x, z)[0])
    dzy = float(distances(spec, z, y)[0])
    detail = f"p={spec.exponent!r} d(x,y)={dxy!r} > d(x,z)+d(z,y)={dxz + dzy!r}"
    return PropertyReport("triangle_inequality", trials, excess, WITNESS_ATOL,
                          _as_witness(*pts), detail)


def check_p_limit(frame: Frame, weights, x, y,
                  p_schedule: Sequence[float] = tuple(2.0 ** k for k in range(11)),
                  ) -> PropertyReport:
    """sigma <= d_p <= sigma n^(1/p) along an increasing schedule of p.

    Also checks that d_p - d_inf never grows along the schedule and that
    the last residual is within sigma (n^(1/p_max) - 1).  Violations are
    relative to sigma = d_inf.
    """
    ps = [float(p) for p in p_schedule]
    if any(p < 1 for p in ps) or any(b <= a for a, b in zip(ps, ps[1:])):
        raise ValueError("schedule must be increasing with every p >= 1")
    x = np.asarray(x, dtype=float)[None, :]
    y = np.asarray(y, dtype=float)[None, :]
    n = frame.n
    sigma = float(distances(MetricSpec(frame, weights, INFINITY), x, y)[0])
    if sigma == 0:
        return PropertyReport("p_limit", len(ps), 0.0, ALGEBRA_RTOL, detail="x == y")
    worst = 0.0
    witness = None
    residuals = []
    for p in ps:
        d = float(distances(MetricSpec(frame, weights, p), x, y)[0])
        lower = (sigma - d) / sigma
        upper = (d - sigma * n ** (1 / p)) / sigma
        residuals.append(d - sigma)
        v = max(lower, upper, 0.0)
        if v > worst:
            worst, witness = v, ((p,), tuple(x[0]), tuple(y[0]))
    for prev, cur in zip(residuals, residuals[1:]):
        worst = max(worst, (cur - prev) / sigma)
    final = (residuals[-1] - sigma * (n ** (1 / ps[-1]) - 1)) / sigma
    worst = max(worst, final)
    rep_witness = witness if worst > ALGEBRA_RTOL else None
    return PropertyReport("p_limit", len(ps), worst, ALGEBRA_RTOL, rep_witness,
                          detail=f"final_residual={residuals[-1]!r} sigma={sigma!r}")


def _sample_boundary(boundary, samples: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(boundary, Parallelogram4):
        k = rng.integers(0, 4, size=samples)
        t = rng.random(samples)
        return boundary.vertices[k] + t[:, None] * boundary.edges[k]
    if isinstance(boundary, EllipseParams):
        return boundary.points(rng.uniform(0, 2 * np.pi, size=samples))
    if isinstance(boundary, Polyline):
        return boundary.points[rng.integers(0, len(boundary.points), size=samples)]
    raise TypeError(f"cannot sample boundary of type {type(boundary).__name__}")


def check_ball_membership(spec: BallSpec, boundary, samples: int = 1000, seed: int = 0,
                          tolerance: float = MEMBERSHIP_RTOL) -> PropertyReport:
    """Sample ``boundary`` and require |d(center, P) - r| <= tolerance * r."""
    pts = _sample_boundary(boundary, samples, rng_for(seed, 0))
    centers = np.broadcast_to(spec.center, pts.shape)
    d = distances(spec.metric, centers, pts)
    err = np.abs(d - spec.radius) / spec.radius
    i = int(np.argmax(err))
    worst = float(err[i])
    witness = _as_witness(pts[i]) if worst > tolerance else None
    return PropertyReport("ball_membership", samples, worst, tolerance, witness,
                          detail=f"kind={spec.kind.value}")


def check_invariance(spec: MetricSpec, cfg: SampleConfig, workers: int = 1) -> PropertyReport:
    """Translation invariance and ratio preservation along parallel lines."""
    _check_dimension(spec, cfg)

    def work(rng, size):
        x, y, t = (_uniform(rng, cfg, size) for _ in range(3))
        d = distances(spec, x, y)
        dt = distances(spec, x + t, y + t)
        shift = np.abs(dt - d) / np.where(d > 0, d, 1.0)

        # two parallel lines through p and q, points kept >= 0.5 apart
        p = _uniform(rng, cfg, size)
        q = _uniform(rng, cfg, size)
        u = rng.normal(size=(size, cfg.dimension))
        k = rng.uniform(0.5, cfg.box_half_width, size=(size, 2)) * rng.choice([-1.0, 1.0], size=(size, 2))
        W, X = p, p + k[:, :1] * u
        Y, Z = q, q + k[:, 1:] * u
        ratio = distances(spec, W, X) / distances(spec, Y, Z)
        euclid = np.linalg.norm(W - X, axis=1) / np.linalg.norm(Y - Z, axis=1)
        line = np.abs(ratio - euclid) / euclid
        return {"translation": _worst(shift, ALGEBRA_RTOL, x, y, t),
                "line_ratio": _worst(line, LINE_RATIO_RTOL, W, X, Y, Z)}

    results = _run(cfg, work, ALGEBRA_RTOL, workers)
    t_worst, t_wit = results["translation"]
    c_worst, c_wit = results["line_ratio"]
    if c_worst <= LINE_RATIO_RTOL:
        c_wit = None
    parts = (PropertyReport("translation", cfg.count, t_worst, ALGEBRA_RTOL, t_wit),
             PropertyReport("line_ratio", cfg.count, c_worst, LINE_RATIO_RTOL, c_wit))
    # expressed in multiples of each part's own tolerance
    worst = max(t_worst / ALGEBRA_RTOL, c_worst / LINE_RATIO_RTOL)
    return PropertyReport("invariance", cfg.count, worst, 1.0, t_wit or c_wit, parts=parts)


# ---------------------------------------------------------------------------
# randomized instances shared by the ball and conic suites


def random_frame(rng: np.random.Generator, n: int = 2, min_det: float = 1e-3) -> Frame:
    while True:
        m = rng.normal(size=(n, n))
        m /= np.linalg.norm(m, axis=1)[:, None]
        if abs(np.linalg.det(m)) > min_det:
            return Frame(m)


def random_frame2(rng: np.random.Generator, min_theta: float = 0.05) -> Frame2:
    """Planar frame whose non-obtuse angle lies in [min_theta, pi/2]."""
    phi = rng.uniform(0, 2 * np.pi)
    theta = rng.uniform(min_theta, np.pi / 2)
    sign = rng.choice([-1.0, 1.0])
    v1 = np.array([math.cos(phi), math.sin(phi)])
    v2 = np.array([math.cos(phi + sign * theta), math.sin(phi + sign * theta)])
    return Frame2(v1, v2)


def random_ellipse(rng: np.random.Generator, w: float = 10.0,
                   max_aspect: float = 50.0) -> EllipseParams:
    b = rng.uniform(0.1, 10.0)
    a = b * rng.uniform(1.0, max_aspect)
    return EllipseParams(rng.uniform(-w, w, 2), a, b, rng.uniform(0, np.pi))


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(y), 1e-300)


def check_ball_constructions(cfg: SampleConfig, ellipse_samples: int = 1000) -> PropertyReport:
    """Vertices of p = 1 / p = inf circles and sampled p = 2 ellipse points lie on the level set."""
    worst = 0.0
    witness = None
    rng = rng_for(cfg.seed, 0)
    for _ in range(cfg.count):
        frame = random_frame2(rng)
        weights = tuple(rng.uniform(0.1, 10.0, 2))
        center = rng.uniform(-cfg.box_half_width, cfg.box_half_width, 2)
        r = rng.uniform(0.1, 10.0)
        for p in (1.0, INFINITY):
            spec = BallSpec(frame, weights, center, r, p)
            poly = balls.taxicab_circle(spec) if p == 1 else balls.maximum_circle(spec)
            d = distances(spec.metric, np.broadcast_to(center, (4, 2)), poly.vertices)
            v = float(np.max(np.abs(d - r)) / r)
            if v > worst:
                worst, witness = v, _as_witness(*poly.vertices)
        spec = BallSpec(frame, weights, center, r, 2.0)
        ellipse = conics.ellipse_from_conic(balls.euclidean_circle_conic(spec))
        rep = check_ball_membership(spec, ellipse, ellipse_samples, int(rng.integers(2 ** 63)))
        if rep.max_violation > worst:
            worst, witness = rep.max_violation, rep.witness
    return PropertyReport("ball_constructions", cfg.count, worst, MEMBERSHIP_RTOL,
                          witness if worst > MEMBERSHIP_RTOL else None)


def check_ellipse_relations(cfg: SampleConfig) -> PropertyReport:
    """Closed-form ellipse identities checked on random ellipses."""
    rng = rng_for(cfg.seed, 1)
    worst = 0.0
    witness = None
    for _ in range(cfg.count):
        e = random_ellipse(rng, cfg.box_half_width)
        a, b = e.a, e.b
        frame, r = conics.ball_from_ellipse(e)
        theta = frame.theta
        R = conics.eccentric_radius(e)
        checks = [
            _rel(r * r, 2 * a * a * b * b / (a * a + b * b)),
            max(b - r, r - a, 0.0) / a,
            _rel(math.tan(theta / 2), b / a),
            _rel(math.sin(theta), r * r / (a * b)),
            abs(math.cos(theta) - (a * a - b * b) / (a * a + b * b)),
            _rel(R, math.sqrt((a * a + b * b) / 2)),
            _rel(R * r, a * b),
            abs(conics.eccentricity(e) - conics.eccentricity_from_angle(theta)),
        ]
        v = max(checks)
        if v > worst:
            worst, witness = v, ((a, b, e.angle),)
    return PropertyReport("ellipse_relations", cfg.count, worst, 1e-10,
                          witness if worst > 1e-10 else None)


def check_round_trips(cfg: SampleConfig) -> PropertyReport:
    """frame -> ellipse -> frame and ellipse -> eccentrix form -> ellipse."""
    rng = rng_for(cfg.seed, 2)
    worst = 0.0
    witness = None
    for _ in range(cfg.count):
        frame = random_frame2(rng)
        center = rng.uniform(-cfg.box_half_width, cfg.box_half_width, 2)
        r = rng.uniform(0.1, 10.0)
        e = conics.ellipse_from_ball(frame, center, r)
        frame2, r2 = conics.ball_from_ellipse(e)
        before = conics.LinePair.from_frame(frame, center)
        after = conics.LinePair.from_frame(frame2, e.center)
        v1 = max(_rel(r2, r), 0.0 if before.same_lines(after, 1e-9) else 1.0)

        e0 = random_ellipse(rng, cfg.box_half_width)
        e1 = conics.ellipse_from_eccentrix_form(conics.eccentrix_form_from_ellipse(e0))
        dang = abs(e1.angle - e0.angle)
        dang = min(dang, math.pi - dang)
        v2 = max(_rel(e1.a, e0.a), _rel(e1.b, e0.b), dang,
                 float(np.max(np.abs(e1.center - e0.center))) / max(1.0, e0.a))
        v = max(v1, v2)
        if v > worst:
            worst, witness = v, ((frame.v1[0], frame.v1[1], frame.v2[0], frame.v2[1], r),
                                 (e0.a, e0.b, e0.angle))
    return PropertyReport("round_trips", cfg.count, worst, 1e-9,
                          witness if worst > 1e-9 else None)


def check_apollonius(cfg: SampleConfig) -> PropertyReport:
    """Eccentrix chords: semi-diameter square sum a^2 + b^2, parallelogram area ab."""
    rng = rng_for(cfg.seed, 3)
    worst = 0.0
    witness = None
    for _ in range(cfg.count):
        e = random_ellipse(rng, cfg.box_half_width)
        chords = conics.conjugate_diameter_chords(e)
        s1 = chords[0, 0] - e.center
        s2 = chords[1, 0] - e.center
        square_sum = float(s1 @ s1 + s2 @ s2)
        area = abs(float(balls.cross2(s1, s2)))
        v = max(_rel(square_sum, e.a ** 2 + e.b ** 2), _rel(area, e.a * e.b))
        if v > worst:
            worst, witness = v, ((e.a, e.b, e.angle),)
    return PropertyReport("apollonius", cfg.count, worst, 1e-10,
                          witness if worst > 1e-10 else None)


def check_hyperbola(cfg: SampleConfig) -> PropertyReport:
    """delta < 0 and perpendicular asymptotes for random line pairs."""
    rng = rng_for(cfg.seed, 4)
    worst = 0.0
    witness = None
    for _ in range(cfg.count):
        frame = random_frame2(rng, min_theta=1e-3)
        lines = conics.LinePair.from_frame(frame)
        k = float(rng.uniform(0.1, 10.0) * rng.choice([-1.0, 1.0]))
        h = conics.hyperbola_from_line_pair(lines, k)
        m1, m2 = h.slopes
        if math.isinf(m2):
            v = abs(m1)
        else:
            v = abs(m1 * m2 + 1)
        if not h.conic.delta < 0:
            v = math.inf
        if v > worst:
            worst, witness = v, (tuple(frame.v1), tuple(frame.v2))
    return PropertyReport("hyperbola_asymptotes", cfg.count, worst, 1e-10,
                          witness if worst > 1e-10 else None)


SUITES = ("axioms", "plimit", "balls", "invariance", "conics")


def run_suite(name: str, spec: MetricSpec, cfg: SampleConfig,
              workers: int = 1) -> list[PropertyReport]:
    """Reports for one named suite; ``all`` runs every suite in order."""
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, spec, cfg, workers)]
    if name == "axioms":
        if spec.is_metric:
            rep = check_metric_axioms(spec, cfg, workers)
            return [*rep.parts, rep]
        return [find_triangle_violation(spec, cfg)]
    if name == "plimit":
        rng = rng_for(cfg.seed, 5)
        reports = [check_p_limit(spec.frame, spec.weights, *_uniform(rng, cfg, 2))
                   for _ in range(min(cfg.count, 1000))]
        worst = max(reports, key=lambda r: r.max_violation)
        return [PropertyReport("p_limit", len(reports), worst.max_violation,
                               worst.tolerance, worst.witness)]
    if name == "balls":
        small = SampleConfig(cfg.seed, min(cfg.count, 200), cfg.box_half_width, 2)
        return [check_ball_constructions(small, ellipse_samples=200)]
    if name == "invariance":
        rep = check_invariance(spec, cfg, workers)
        return [*rep.parts]
    if name == "conics":
        small = SampleConfig(cfg.seed, min(cfg.count, 1000), cfg.box_half_width, 2)
        return [check_ellipse_relations(small), check_round_trips(small),
                check_apollonius(small), check_hyperbola(small)]
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
