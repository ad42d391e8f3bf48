"""Frame-weighted Minkowski distances in n dimensions.

A distance is fixed by a frame of n linearly independent unit vectors
v_1..v_n with positive weights lambda_i, plus an exponent p in (0, inf]:

    d(x, y) = (sum_i (lambda_i |<v_i, x - y>|)^p)^(1/p)

with the p = inf member evaluated as max_i lambda_i |<v_i, x - y>|.
With the identity frame and unit weights this is the ordinary l_p distance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DependentFrameError,
    DimensionMismatchError,
    GeometryError,
    NotUnitError,
    ZeroVectorError,
)

EPS_UNIT = 1e-9
EPS_INDEP = 1e-12
INFINITY = math.inf

ArrayLike = Sequence[float] | np.ndarray


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_point(coords: ArrayLike, n: int | None = None) -> np.ndarray:
    """Validate ``coords`` as a point with at least two finite coordinates."""
    p = np.array(coords, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise DimensionMismatchError(f"a point needs >= 2 coordinates, got shape {p.shape}")
    if n is not None and p.size != n:
        raise DimensionMismatchError(f"expected {n} coordinates, got {p.size}")
    if not np.all(np.isfinite(p)):
        raise GeometryError(f"non-finite coordinate in {p!r}")
    return _frozen(p)


def check_exponent(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p <= 0:
        raise GeometryError(f"exponent must be > 0 or inf, got {p}")
    return p


def _rows(rows: ArrayLike) -> np.ndarray:
    m = np.array(rows, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
        raise DimensionMismatchError(f"frame must be n x n with n >= 2, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise GeometryError("frame contains non-finite entries")
    return m


def _check_independent(m: np.ndarray) -> float:
    det = float(np.linalg.det(m))
    if abs(det) <= EPS_INDEP:
        raise DependentFrameError(f"frame vectors are linearly dependent (det={det:.3g})")
    return det


@dataclass(frozen=True, eq=False)
class Frame:
    """n linearly independent unit vectors, one per row.

    ``det`` is always recomputed from ``vectors``.
    """

    vectors: np.ndarray
    det: float = field(init=False)

    def __post_init__(self):
        m = _rows(self.vectors)
        lengths = np.linalg.norm(m, axis=1)
        if np.any(lengths < EPS_INDEP):
            raise ZeroVectorError("frame contains a zero vector")
        bad = np.abs(lengths - 1.0) > EPS_UNIT
        if np.any(bad):
            i = int(np.argmax(bad))
            raise NotUnitError(f"frame vector {i} has length {lengths[i]!r}, expected 1")
        object.__setattr__(self, "vectors", _frozen(m))
        object.__setattr__(self, "det", _check_independent(m))

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @classmethod
    def identity(cls, n: int = 2) -> Frame:
        return cls(np.eye(n))

    def project(self, diff: np.ndarray) -> np.ndarray:
        """Signed projections <v_i, diff>; ``diff`` may carry leading batch axes."""
        return diff @ self.vectors.T


def validate_frame(rows: ArrayLike, normalize: bool = False) -> Frame:
    m = _rows(rows)
    lengths = np.linalg.norm(m, axis=1)
    if np.any(lengths < EPS_INDEP):
        raise ZeroVectorError("frame contains a zero vector")
    if normalize:
        m = m / lengths[:, None]
    return Frame(m)


@dataclass(frozen=True, eq=False)
class MetricSpec:
    frame: Frame
    weights: np.ndarray
    exponent: float = 2.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.frame.n,):
            raise DimensionMismatchError(
                f"need {self.frame.n} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise GeometryError(f"weights must be finite and > 0, got {w.tolist()}")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "exponent", check_exponent(self.exponent))

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def is_metric(self) -> bool:
        return self.exponent >= 1

    @classmethod
    def standard(cls, n: int = 2, exponent: float = 2.0) -> MetricSpec:
        """Identity frame with unit weights: the textbook l_p distance."""
        return cls(Frame.identity(n), np.ones(n), exponent)

    def with_exponent(self, exponent: float) -> MetricSpec:
        return MetricSpec(self.frame, self.weights, exponent)


def combine(terms: np.ndarray, p: float) -> np.ndarray | float:
    """Return (sum t_i^p)^(1/p) over the last axis of nonnegative ``terms``.

    The largest term is factored out first so large p neither overflows
    nor underflows; p = inf is the plain maximum.
    """
    terms = np.asarray(terms, dtype=float)
    sigma = terms.max(axis=-1)
    if p == INFINITY:
        return sigma
    if p == 1:
        return terms.sum(axis=-1)
    safe = np.where(sigma > 0, sigma, 1.0)
    return sigma * np.sum((terms / safe[..., None]) ** p, axis=-1) ** (1.0 / p)


def weighted_terms(spec: MetricSpec, diff: np.ndarray) -> np.ndarray:
    """lambda_i |<v_i, diff>| for each frame vector."""
    return spec.weights * np.abs(spec.frame.project(diff))


def _diff(spec_n: int, x: ArrayLike, y: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (spec_n,) or y.shape != (spec_n,):
        raise DimensionMismatchError(
            f"points must have {spec_n} coordinates, got {x.shape} and {y.shape}")
    return x - y


def distance(spec: MetricSpec, x: ArrayLike, y: ArrayLike) -> float:
    return float(combine(weighted_terms(spec, _diff(spec.n, x, y)), spec.exponent))


def distances(spec: MetricSpec, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Row-wise distances between two (m, n) point arrays."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 2 or xs.shape[1] != spec.n:
        raise DimensionMismatchError(
            f"expected two (m, {spec.n}) arrays, got {xs.shape} and {ys.shape}")
    return combine(weighted_terms(spec, xs - ys), spec.exponent)


def norm(spec: MetricSpec, x: ArrayLike) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.n,):
        raise DimensionMismatchError(f"expected {spec.n} coordinates, got {x.shape}")
    return float(combine(weighted_terms(spec, x), spec.exponent))


def norms(spec: MetricSpec, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    return combine(weighted_terms(spec, xs), spec.exponent)


def line_scale_factor(spec: MetricSpec, direction: ArrayLike) -> float:
    """Ratio of the generalized length to the Euclidean length along ``direction``.

    Any two points X, Y on a line with this direction satisfy
    d(X, Y) = factor * |X - Y|_2.
    """
    u = np.asarray(direction, dtype=float)
    if u.shape != (spec.n,):
        raise DimensionMismatchError(f"expected {spec.n} components, got {u.shape}")
    length = float(np.linalg.norm(u))
    if length < EPS_INDEP:
        raise ZeroVectorError("direction must be nonzero")
    return norm(spec, u) / length


@dataclass(frozen=True, eq=False)
class HyperplaneSpec:
    """The hyperplane through ``anchor`` perpendicular to the unit ``normal``."""

    anchor: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        anchor = as_point(self.anchor)
        normal = np.array(self.normal, dtype=float)
        if normal.shape != anchor.shape:
            raise DimensionMismatchError("anchor and normal dimensions differ")
        if abs(np.linalg.norm(normal) - 1.0) > EPS_UNIT:
            raise NotUnitError(f"normal {normal.tolist()} is not a unit vector")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "normal", _frozen(normal))


def hyperplane_distance(h: HyperplaneSpec, y: ArrayLike) -> float:
    y = np.asarray(y, dtype=float)
    if y.shape != h.anchor.shape:
        raise DimensionMismatchError(
            f"point has shape {y.shape}, hyperplane lives in {h.anchor.size} dimensions")
    return abs(float(np.dot(h.normal, h.anchor - y)))


class VariantMode(enum.Enum):
    PRIME = "prime"                 # raw vectors, each projection divided by |v_i|
    DOUBLE_PRIME = "double_prime"   # unit vectors, mu_i multiplies |<v_i, .>|^p


@dataclass(frozen=True, eq=False)
class VariantSpec:
    mode: VariantMode
    frame_raw: np.ndarray
    coeffs: np.ndarray
    exponent: float = 2.0

    def __post_init__(self):
        mode = VariantMode(self.mode)
        m = _rows(self.frame_raw)
        lengths = np.linalg.norm(m, axis=1)
        if np.any(lengths < EPS_INDEP):
            raise ZeroVectorError("frame contains a zero vector")
        if mode is VariantMode.DOUBLE_PRIME and np.any(np.abs(lengths - 1.0) > EPS_UNIT):
            raise NotUnitError("the double-prime variant needs unit vectors")
        _check_independent(m)
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (m.shape[0],) or np.any(~np.isfinite(c)) or np.any(c <= 0):
            raise GeometryError(f"need {m.shape[0]} positive coefficients, got {c.tolist()}")
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "frame_raw", _frozen(m))
        object.__setattr__(self, "coeffs", _frozen(c))
        object.__setattr__(self, "exponent", check_exponent(self.exponent))

    @property
    def n(self) -> int:
        return self.frame_raw.shape[0]


def variant_distance(vspec: VariantSpec, x: ArrayLike, y: ArrayLike) -> float:
    diff = _diff(vspec.n, x, y)
    proj = np.abs(vspec.frame_raw @ diff)
    p = vspec.exponent
    if vspec.mode is VariantMode.PRIME:
        terms = vspec.coeffs * proj / np.linalg.norm(vspec.frame_raw, axis=1)
        return float(combine(terms, p))
    # mu_i sits outside the power, so it drops out entirely when p = inf
    if p == INFINITY:
        return float(proj.max())
    sigma = proj.max()
    if sigma == 0:
        return 0.0
    return float(sigma * np.sum(vspec.coeffs * (proj / sigma) ** p) ** (1.0 / p))


def translate(p: ArrayLike, by: ArrayLike) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    by = np.asarray(by, dtype=float)
    if p.shape != by.shape:
        raise DimensionMismatchError(f"cannot translate shape {p.shape} by {by.shape}")
    return p + by
