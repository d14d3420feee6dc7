"""Finite positive discrete measures on R^d and the regions they live in.

A :class:`WeightedMeasure` is a list of support points with strictly
positive weights.  Weights are stored as given (unnormalized); call
:func:`normalize` when a probability measure is needed.  All values are
immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError, InputError
from .kernels import phase1_simplex

__all__ = [
    "WeightedMeasure",
    "Interval",
    "Disc",
    "Hull",
    "Region",
    "barycenter",
    "expectation",
    "normalize",
    "empirical_from_samples",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class WeightedMeasure:
    """Positive discrete measure sum_i weights[i] * delta_{points[i]}.

    ``points`` has shape (count, dimension); ``weights`` has shape
    (count,) with strictly positive entries.
    """

    dimension: int
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2:
            raise InputError("points must form a 2-d array")
        if pts.shape[0] == 0:
            raise InputError("a measure needs at least one point")
        if self.dimension < 1:
            raise InputError("dimension must be a positive integer")
        if pts.shape[1] != self.dimension:
            raise DimensionMismatchError(
                f"points have {pts.shape[1]} coordinates, expected {self.dimension}"
            )
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if w.shape[0] != pts.shape[0]:
            raise DimensionMismatchError(
                f"{pts.shape[0]} points but {w.shape[0]} weights"
            )
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(w)):
            raise InputError("points and weights must be finite")
        if np.any(w <= 0.0):
            raise InputError("all weights must be strictly positive")
        object.__setattr__(self, "points", _readonly(pts))
        object.__setattr__(self, "weights", _readonly(w))

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    @classmethod
    def from_dict(cls, data: dict) -> "WeightedMeasure":
        """Build from the JSON wire format; missing weights mean uniform."""
        try:
            dim = int(data["dimension"])
            raw_points = data["points"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"measure object needs 'dimension' and 'points': {exc}")
        pts = np.asarray(raw_points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if dim == 1 else pts.reshape(1, -1)
        if "weights" in data and data["weights"] is not None:
            w = np.asarray(data["weights"], dtype=np.float64)
        else:
            count = pts.shape[0]
            w = np.full(count, 1.0 / count) if count else np.zeros(0)
        return cls(dimension=dim, points=pts, weights=w)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "points": self.points.tolist(),
            "weights": self.weights.tolist(),
        }


@dataclass(frozen=True)
class Interval:
    """Real interval [lo, hi], either endpoint optionally open or infinite."""

    lo: float
    hi: float
    open_lo: bool = False
    open_hi: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InputError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    dimension = 1

    def contains(self, x, tol: float = 0.0) -> bool:
        t = float(np.asarray(x).reshape(-1)[0])
        if self.open_lo:
            lo_ok = t > self.lo - tol
        else:
            lo_ok = t >= self.lo - tol
        if self.open_hi:
            hi_ok = t < self.hi + tol
        else:
            hi_ok = t <= self.hi + tol
        return bool(lo_ok and hi_ok)

    def is_bounded(self) -> bool:
        return np.isfinite(self.lo) and np.isfinite(self.hi)


@dataclass(frozen=True)
class Disc:
    """Closed disc in R^2."""

    center: tuple
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=np.float64).reshape(-1)
        if c.shape[0] != 2:
            raise DimensionMismatchError("disc center must have 2 coordinates")
        if self.radius < 0:
            raise InputError("disc radius must be nonnegative")
        object.__setattr__(self, "center", (float(c[0]), float(c[1])))

    dimension = 2

    def contains(self, x, tol: float = 0.0) -> bool:
        p = np.asarray(x, dtype=np.float64).reshape(-1)
        if p.shape[0] != 2:
            return False
        return bool(np.hypot(p[0] - self.center[0], p[1] - self.center[1]) <= self.radius + tol)

    def is_bounded(self) -> bool:
        return True


@dataclass(frozen=True)
class Hull:
    """Convex hull of a finite point list in R^d.

    Membership is decided as a small linear feasibility problem: the query
    point must be a convex combination of the vertices.
    """

    vertices: np.ndarray = field()

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=np.float64))
        if v.shape[0] < 1:
            raise InputError("hull needs at least one point")
        object.__setattr__(self, "vertices", _readonly(v))

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    def contains(self, x, tol: float = 1e-9) -> bool:
        p = np.asarray(x, dtype=np.float64).reshape(-1)
        if p.shape[0] != self.dimension:
            return False
        verts = self.vertices
        k = verts.shape[0]
        # theta >= 0, sum theta = 1, verts.T theta = p
        a_eq = np.vstack([np.ones((1, k)), verts.T])
        b_eq = np.concatenate([[1.0], p])
        scale = max(1.0, float(np.max(np.abs(verts))), float(np.max(np.abs(p))))
        status, obj, _ = phase1_simplex(a_eq, b_eq, 50 * (k + verts.shape[1] + 2))
        if status != 0:
            return False
        return bool(obj <= (1 + verts.shape[1]) * tol * scale)

    def is_bounded(self) -> bool:
        return True


Region = Interval | Disc | Hull


def _evaluate_scalar_pointwise(f, pts: np.ndarray) -> np.ndarray:
    """Apply a function of one real variable to a (count, 1) point array."""
    xs = pts[:, 0]
    domain = getattr(f, "domain", None)
    if domain is not None:
        for t in xs:
            if not domain.contains(t, tol=0.0):
                raise DomainError(f"point {t} is outside the function domain")
    vals = np.asarray(f(xs), dtype=np.float64)
    return vals


def expectation(mu: WeightedMeasure, f: Callable) -> float:
    """Weight-averaged value (sum_i w_i f(x_i)) / (sum_i w_i).

    ``f`` may be a scalar function with a declared domain (for 1-d measures)
    or any callable accepting a (count, dimension) array of points; a scalar
    return value is treated as a constant function.
    """
    if mu.dimension == 1 and getattr(f, "domain", None) is not None:
        vals = _evaluate_scalar_pointwise(f, mu.points)
    else:
        raw = np.asarray(f(mu.points), dtype=np.float64)
        if raw.size == 1:
            vals = np.full(mu.count, float(raw.reshape(-1)[0]))
        elif raw.size == mu.count:
            vals = raw.reshape(-1)
        else:
            raise InputError("function returned wrong number of values")
    if not np.all(np.isfinite(vals)):
        bad = mu.points[~np.isfinite(vals)][0]
        raise DomainError(f"function value not finite at point {bad.tolist()}")
    return float(np.dot(mu.weights, vals) / mu.total_mass)


def barycenter(mu: WeightedMeasure) -> np.ndarray:
    """Mass-weighted mean point, in R^dimension."""
    return np.asarray(mu.weights @ mu.points / mu.total_mass)


def normalize(mu: WeightedMeasure) -> WeightedMeasure:
    """Same support, weights rescaled to total mass one."""
    return WeightedMeasure(
        dimension=mu.dimension,
        points=mu.points,
        weights=mu.weights / mu.total_mass,
    )


def empirical_from_samples(samples: Sequence) -> WeightedMeasure:
    """Uniform measure with weight 1/n on each sample point."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size == 0:
        raise InputError("cannot build an empirical measure from no samples")
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    n = arr.shape[0]
    return WeightedMeasure(
        dimension=arr.shape[1],
        points=arr,
        weights=np.full(n, 1.0 / n),
    )
