"""Verifiers for the named convexity inequalities.

Each verifier checks its hypotheses explicitly (raising when they fail,
with the failed condition named) and then evaluates the inequality with a
caller-visible tolerance.  The six-point witness construction ties the
three-point inequality back to plain vector majorization: the doubled
midpoints are majorized by the original points plus the tripled mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ._defaults import DEFAULT_TOL
from .errors import DomainError, HypothesisError, InputError
from .majorization import is_majorized
from .measures import WeightedMeasure, barycenter, empirical_from_samples, expectation
from .convexity import ScalarFunction

__all__ = [
    "SexticWitness",
    "popoviciu_witness",
    "popoviciu_verify",
    "xexp_weighted_jensen_verify",
    "borwein_girgensohn_verify",
    "bnl_triplet_verify",
    "JensenReport",
    "probabilistic_jensen_verify",
    "witness_majorization_holds",
]


@dataclass(frozen=True)
class SexticWitness:
    """Six-point families for the three-point midpoint inequality.

    ``x_family`` holds the three pairwise midpoints, each doubled;
    ``y_family`` holds the three points once each plus the mean three
    times.  Both are in decreasing order and share the same total,
    2(a+b+c).  ``case_tag`` records whether the mean sits above or below
    the middle point, which decides the decreasing arrangement.
    """

    x_family: tuple
    y_family: tuple
    case_tag: str

    def as_arrays(self):
        return np.array(self.x_family), np.array(self.y_family)


def popoviciu_witness(a: float, b: float, c: float) -> SexticWitness:
    """Build the six-point witness families for the points a, b, c."""
    hi, mid, lo = sorted((float(a), float(b), float(c)), reverse=True)
    m = (hi + mid + lo) / 3.0
    x_family = (
        (hi + mid) / 2.0,
        (hi + mid) / 2.0,
        (hi + lo) / 2.0,
        (hi + lo) / 2.0,
        (mid + lo) / 2.0,
        (mid + lo) / 2.0,
    )
    if m >= mid:
        case_tag = "mean_above_middle"
        y_family = (hi, m, m, m, mid, lo)
    else:
        case_tag = "middle_above_mean"
        y_family = (hi, mid, m, m, m, lo)
    return SexticWitness(x_family=x_family, y_family=y_family, case_tag=case_tag)


def _require_in_domain(f, pts, what: str):
    domain = getattr(f, "domain", None)
    if domain is None:
        return
    for t in pts:
        if not domain.contains(t):
            raise DomainError(f"{what} {t} is outside the domain of {getattr(f, 'name', 'f')!r}")


def popoviciu_verify(f, a: float, b: float, c: float, tol: float = DEFAULT_TOL) -> bool:
    """Three-point midpoint inequality.

    mean of values + value at mean  >=  (2/3) * sum of midpoint values,
    within tol.
    """
    pts = np.array([a, b, c], dtype=np.float64)
    mids = np.array([(a + b) / 2.0, (a + c) / 2.0, (b + c) / 2.0])
    m = float(np.mean(pts))
    _require_in_domain(f, pts, "point")
    _require_in_domain(f, mids, "midpoint")
    _require_in_domain(f, [m], "mean")
    lhs = float(np.mean(f(pts))) + float(f(m))
    rhs = (2.0 / 3.0) * float(np.sum(f(mids)))
    return bool(lhs >= rhs - tol)


def xexp_weighted_jensen_verify(
    lambdas: Sequence[float], xs: Sequence[float], tol: float = DEFAULT_TOL
) -> bool:
    """Weighted Jensen display for t*e^t at a barycenter >= -1.

    sum_k w_k x_k e^{x_k}  >=  (sum_k w_k x_k) e^{sum_k w_k x_k}.
    """
    w = np.asarray(lambdas, dtype=np.float64).reshape(-1)
    x = np.asarray(xs, dtype=np.float64).reshape(-1)
    if w.shape != x.shape:
        raise InputError(f"{w.shape[0]} weights for {x.shape[0]} points")
    if np.any(w <= 0.0):
        raise InputError("weights must be strictly positive")
    if abs(float(np.sum(w)) - 1.0) > max(tol, 1e-9):
        raise InputError(f"weights must sum to 1, got {float(np.sum(w))}")
    bary = float(np.dot(w, x))
    if bary < -1.0 - tol:
        raise HypothesisError(
            f"barycenter {bary} is outside the certified region [-1, inf)"
        )
    lhs = float(np.dot(w, x * np.exp(x)))
    rhs = bary * math.exp(bary)
    return bool(lhs >= rhs - tol)


def borwein_girgensohn_verify(xs: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    """Lower bound on sum x_k e^{x_k} by a multiple of sum x_k^2.

    Requires a nonnegative total; the constant is max(2, e(1 - 1/n))/n.
    """
    x = np.asarray(xs, dtype=np.float64).reshape(-1)
    if x.size == 0:
        raise InputError("empty vector")
    total = float(np.sum(x))
    if total < -tol:
        raise HypothesisError(f"hypothesis violated: sum of entries is {total} < 0")
    n = x.size
    const = max(2.0, math.e * (1.0 - 1.0 / n)) / n
    lhs = float(np.dot(x, np.exp(x)))
    rhs = const * float(np.dot(x, x))
    return bool(lhs >= rhs - tol)


def _elementary_symmetric_3(v: np.ndarray) -> tuple:
    e1 = float(v[0] + v[1] + v[2])
    e2 = float(v[0] * v[1] + v[0] * v[2] + v[1] * v[2])
    e3 = float(v[0] * v[1] * v[2])
    return e1, e2, e3


def bnl_triplet_verify(x: Sequence[float], y: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    """Squared-log comparison for positive triplets.

    Hypotheses on the elementary symmetric functions: e1(x) <= e1(y),
    e2(x) <= e2(y), e3(x) = e3(y) (within tol).  Conclusion:
    sum log^2 x_i <= sum log^2 y_i + tol.
    """
    xa = np.asarray(x, dtype=np.float64).reshape(-1)
    ya = np.asarray(y, dtype=np.float64).reshape(-1)
    if xa.shape != (3,) or ya.shape != (3,):
        raise InputError("both arguments must be triplets")
    if np.any(xa <= 0.0) or np.any(ya <= 0.0):
        raise InputError("triplet entries must be strictly positive")
    e1x, e2x, e3x = _elementary_symmetric_3(xa)
    e1y, e2y, e3y = _elementary_symmetric_3(ya)
    if e1x > e1y + tol:
        raise HypothesisError(f"sum condition fails: e1(x)={e1x} > e1(y)={e1y}")
    if e2x > e2y + tol:
        raise HypothesisError(
            f"pairwise-product condition fails: e2(x)={e2x} > e2(y)={e2y}"
        )
    if abs(e3x - e3y) > tol:
        raise HypothesisError(
            f"product condition fails: e3(x)={e3x} != e3(y)={e3y}"
        )
    lhs = float(np.sum(np.square(np.log(xa))))
    rhs = float(np.sum(np.square(np.log(ya))))
    return bool(lhs <= rhs + tol)


@dataclass(frozen=True)
class JensenReport:
    mean: float
    f_of_mean: float
    mean_of_f: float
    verdict: bool
    truncation_level: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "f_of_mean": self.f_of_mean,
            "mean_of_f": self.mean_of_f,
            "verdict": self.verdict,
            "truncation_level": self.truncation_level,
        }


def probabilistic_jensen_verify(
    dist: Union[WeightedMeasure, Sequence],
    f: ScalarFunction,
    truncation_level: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> JensenReport:
    """Jensen inequality for a random variable given by a discrete law.

    ``dist`` is either a weighted measure or a list of samples (uniform
    weights).  With a truncation level n, the variable is clamped to
    [-n, n] first; the check then runs on the clamped law.
    """
    if isinstance(dist, WeightedMeasure):
        mu = dist
    else:
        mu = empirical_from_samples(dist)
    if mu.dimension != 1:
        raise InputError("the law must be one-dimensional")
    if truncation_level is not None:
        if truncation_level <= 0:
            raise InputError("truncation level must be positive")
        pts = np.clip(mu.points, -truncation_level, truncation_level)
        mu = WeightedMeasure(dimension=1, points=pts, weights=mu.weights)
    mean = float(barycenter(mu)[0])
    if not f.contains(mean):
        raise DomainError(f"mean {mean} is outside the domain of {f.name!r}")
    mean_of_f = expectation(mu, f)
    f_of_mean = float(f(mean))
    return JensenReport(
        mean=mean,
        f_of_mean=f_of_mean,
        mean_of_f=mean_of_f,
        verdict=bool(f_of_mean <= mean_of_f + tol),
        truncation_level=truncation_level,
    )


def witness_majorization_holds(w: SexticWitness, tol: float = DEFAULT_TOL) -> bool:
    """Doubled midpoints are majorized by points plus tripled mean."""
    xf, yf = w.as_arrays()
    return is_majorized(xf, yf, tol)
