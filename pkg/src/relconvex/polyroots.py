"""Complex polynomial roots and the root-distribution inequalities.

Roots come from simultaneous Aberth refinement started on a circle inside
the Cauchy bound; exact zero constant terms are deflated first so that
origin roots come back exact.  The derivative's roots are compared against
the polynomial's roots three ways: convex-hull containment, weighted
majorization of the uniform root measures (an LP decision on R^2), and
direct mean comparisons for convex (or, for the Gaussian bump, concave)
test functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._defaults import DEFAULT_TOL
from .errors import ConvergenceError, HypothesisError, InputError
from .kernels import aberth_refine
from .measures import WeightedMeasure
from .transport import FeasibilityVerdict, weighted_majorization_decide
from . import convexity

__all__ = [
    "ComplexPolynomial",
    "derivative",
    "roots",
    "gauss_lucas_check",
    "malamud_majorization_check",
    "debruijn_springer_verify",
    "relative_concavity_verify",
    "convex_hull_2d",
    "hull_contains",
    "critical_disc_radius",
]

CLUSTER_TOL = 1e-6
MAX_ITER = 200
STEP_TOL = 1e-12


@dataclass(frozen=True)
class ComplexPolynomial:
    """Coefficients in ascending degree order; leading coefficient nonzero."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=np.complex128))
        if c.ndim != 1 or c.size == 0:
            raise InputError("coefficients must form a nonempty 1-d sequence")
        # Trim exactly-zero leading terms; keep at least the constant.
        last = c.size - 1
        while last > 0 and c[last] == 0:
            last -= 1
        c = c[: last + 1].copy()
        if c.size > 1 and abs(c[-1]) <= 1e-300:
            raise InputError("leading coefficient is numerically zero")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, z):
        return np.polyval(self.coefficients[::-1], z)

    @classmethod
    def from_pairs(cls, pairs: Sequence) -> "ComplexPolynomial":
        arr = np.asarray(pairs, dtype=np.float64)
        if arr.ndim == 1:
            return cls(coefficients=arr.astype(np.complex128))
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InputError("coefficient pairs must be [re, im] rows")
        return cls(coefficients=arr[:, 0] + 1j * arr[:, 1])

    @classmethod
    def from_roots(cls, rts: Sequence[complex]) -> "ComplexPolynomial":
        coeffs = np.array([1.0 + 0.0j])
        for r in rts:
            coeffs = np.convolve(coeffs, np.array([-r, 1.0 + 0.0j]))
        return cls(coefficients=coeffs)

    def to_pairs(self) -> list:
        return [[float(c.real), float(c.imag)] for c in self.coefficients]


def derivative(p: ComplexPolynomial) -> ComplexPolynomial:
    if p.degree < 1:
        raise InputError("cannot differentiate a constant polynomial")
    c = p.coefficients
    return ComplexPolynomial(coefficients=c[1:] * np.arange(1, c.size))


def _cluster_merge(z: np.ndarray, tol: float) -> np.ndarray:
    """Replace groups of nearby iterates by their common mean."""
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= tol:
                parent[find(i)] = find(j)
    out = z.copy()
    for root_id in set(find(i) for i in range(n)):
        members = [i for i in range(n) if find(i) == root_id]
        if len(members) > 1:
            mean = np.mean(z[members])
            for i in members:
                out[i] = mean
    return out


def roots(p: ComplexPolynomial, tol: float = STEP_TOL) -> np.ndarray:
    """All complex roots, with multiplicity, sorted by real then imaginary part."""
    if p.degree < 1:
        raise InputError("root finding needs degree >= 1")
    c = p.coefficients
    # Deflate exact origin roots before iterating.
    k = 0
    while k < c.size - 1 and c[k] == 0:
        k += 1
    origin = np.zeros(k, dtype=np.complex128)
    c = c[k:]
    deg = c.size - 1
    if deg == 0:
        found = origin
    elif deg == 1:
        found = np.concatenate([origin, [-c[0] / c[1]]])
    else:
        monic = (c / c[-1]).astype(np.complex128)
        radius = 0.7 * (1.0 + float(np.max(np.abs(monic[:-1]))))
        angles = 2.0 * np.pi * np.arange(deg) / deg + 0.4
        z = radius * np.exp(1j * angles)
        iters, converged = aberth_refine(monic, z, tol, MAX_ITER)
        if not converged:
            raise ConvergenceError(
                f"root refinement did not converge in {iters} iterations",
                best=np.concatenate([origin, z]),
            )
        found = np.concatenate([origin, _cluster_merge(z, CLUSTER_TOL)])
    order = np.lexsort((found.imag, found.real))
    return found[order]


def convex_hull_2d(points: np.ndarray) -> np.ndarray:
    """Monotone-chain convex hull; vertices counterclockwise, no repeats."""
    pts = np.unique(np.asarray(points, dtype=np.float64), axis=0)
    if pts.shape[0] <= 2:
        return pts
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for q in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    upper = []
    for q in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    return np.array(lower[:-1] + upper[:-1])


def _dist_to_segment(p, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.hypot(*(p - a)))
    t = float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    proj = a + t * ab
    return float(np.hypot(*(p - proj)))


def hull_contains(hull: np.ndarray, p: np.ndarray, tol: float) -> bool:
    """Membership with a tolerance band around the hull boundary."""
    if hull.shape[0] == 1:
        return bool(np.hypot(*(p - hull[0])) <= tol)
    if hull.shape[0] == 2:
        return _dist_to_segment(p, hull[0], hull[1]) <= tol
    m = hull.shape[0]
    for i in range(m):
        a = hull[i]
        b = hull[(i + 1) % m]
        edge = b - a
        length = float(np.hypot(*edge))
        if length == 0.0:
            continue
        # Signed distance of p to the directed edge; inside is positive.
        s = ((edge[0]) * (p[1] - a[1]) - (edge[1]) * (p[0] - a[0])) / length
        if s < -tol:
            return False
    return True


def gauss_lucas_check(p: ComplexPolynomial, tol: float = DEFAULT_TOL) -> bool:
    """Roots of the derivative lie in the hull of the polynomial's roots."""
    if p.degree < 2:
        raise InputError("the hull check needs degree >= 2")
    lam = roots(p)
    mu = roots(derivative(p))
    hull = convex_hull_2d(np.column_stack([lam.real, lam.imag]))
    band = max(tol, 1e-7 * max(1.0, float(np.max(np.abs(lam)))))
    return all(
        hull_contains(hull, np.array([z.real, z.imag]), band) for z in mu
    )


def _root_measures(p: ComplexPolynomial):
    lam = roots(p)
    mu = roots(derivative(p))
    n = lam.size
    mu_y = WeightedMeasure(
        dimension=2,
        points=np.column_stack([lam.real, lam.imag]),
        weights=np.full(n, 1.0 / n),
    )
    mu_x = WeightedMeasure(
        dimension=2,
        points=np.column_stack([mu.real, mu.imag]),
        weights=np.full(n - 1, 1.0 / (n - 1)),
    )
    return mu_x, mu_y, lam, mu


def malamud_majorization_check(
    p: ComplexPolynomial, tol: float = DEFAULT_TOL
) -> FeasibilityVerdict:
    """Uniform measure on derivative roots vs uniform measure on roots.

    Decided by the weighted-majorization LP on R^2; Feasible comes with a
    row-stochastic certificate expressing each derivative root as a
    barycenter of polynomial roots with matching weight transfer.
    """
    if p.degree < 2:
        raise InputError("the majorization check needs degree >= 2")
    mu_x, mu_y, _, _ = _root_measures(p)
    # The LP works at the solver tolerance; root noise is ~1e-12 so a
    # too-tight tol would reject genuinely feasible instances.
    return weighted_majorization_decide(mu_x, mu_y, max(tol, 1e-8))


def debruijn_springer_verify(
    p: ComplexPolynomial, f: Callable, tol: float = DEFAULT_TOL
) -> bool:
    """Mean of f over derivative roots <= mean of f over roots.

    ``f`` takes a complex array and returns reals; it should be convex as
    a function on the plane for the inequality to be meaningful.
    """
    if p.degree < 2:
        raise InputError("the mean comparison needs degree >= 2")
    lam = roots(p)
    mu = roots(derivative(p))
    lhs = float(np.mean(np.asarray(f(mu), dtype=np.float64)))
    rhs = float(np.mean(np.asarray(f(lam), dtype=np.float64)))
    return bool(lhs <= rhs + tol)


_critical_radius_cache: list = []


def critical_disc_radius() -> float:
    """Radius of the outer disc in the Gaussian-bump root inequality.

    Computed, not hardcoded: it is the far tangent crossing of e^{-t^2}
    anchored at t = 1/2, the same constant the 1-d boundary search
    produces.
    """
    if not _critical_radius_cache:
        f = convexity.builtin_function("gauss1d")
        _critical_radius_cache.append(convexity.convexity_boundary(f, 0.5, "right"))
    return _critical_radius_cache[0]


def relative_concavity_verify(p: ComplexPolynomial, tol: float = DEFAULT_TOL) -> bool:
    """Reversed mean comparison for the Gaussian bump e^{-|z|^2}.

    Hypotheses: derivative roots inside the closed disc of radius 1/2,
    polynomial roots inside the closed disc of the computed critical
    radius (about 1.1838).  Conclusion: the derivative-root mean of the
    bump dominates the root mean.
    """
    if p.degree < 2:
        raise InputError("the concavity comparison needs degree >= 2")
    lam = roots(p)
    mu = roots(derivative(p))
    r_star = critical_disc_radius()
    for z in mu:
        if abs(z) > 0.5 + max(tol, 1e-9):
            raise HypothesisError(
                f"derivative root {z:.6g} lies outside the disc of radius 0.5"
            )
    for z in lam:
        if abs(z) > r_star + max(tol, 1e-9):
            raise HypothesisError(
                f"root {z:.6g} lies outside the disc of radius {r_star:.9g}"
            )
    lhs = float(np.mean(np.exp(-np.abs(mu) ** 2)))
    rhs = float(np.mean(np.exp(-np.abs(lam) ** 2)))
    return bool(lhs >= rhs - tol)
