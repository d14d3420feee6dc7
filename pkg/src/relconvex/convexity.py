"""Numerical certification of points of convexity via supporting lines.

A point ``a`` is certified relative to an interval region when an affine
line through (a, f(a)) stays at or below the graph of f on the whole
region.  Certification is grid-plus-refinement: a uniform scan followed by
recursive bisection of cells that change sign or run close to zero.  The
certificate records its own resolution; it is strong numerical evidence at
that resolution, not a symbolic proof.

The same tangent-line geometry yields the boundary of a convexity
neighborhood: the far root of f(t) - f(a) - f'(a)(t - a), located by a
growing-step walk, bracketing bisection, and a Newton polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from ._defaults import DEFAULT_HORIZON, DEFAULT_TOL
from .errors import DomainError, HypothesisError, InputError
from .measures import Interval, WeightedMeasure, barycenter, expectation

__all__ = [
    "ScalarFunction",
    "SupportCertificate",
    "Refuted",
    "support_line_certify",
    "convexity_boundary",
    "jensen_at_point_verify",
    "random_convexity_falsifier",
    "builtin_function",
    "function_from_expression",
    "BUILTIN_NAMES",
]

_FD_SEED = 176401
_FD_POINTS = 100
_FD_WINDOW = 20.0


@dataclass(frozen=True)
class ScalarFunction:
    """Real function on an interval domain, with an optional derivative.

    The derivative evaluator, when given, is validated against central
    finite differences at registration time; a mismatch is rejected
    immediately rather than surfacing later as a wrong boundary.
    """

    name: str
    fn: Callable
    domain: Interval = field(default_factory=lambda: Interval(-math.inf, math.inf))
    derivative: Optional[Callable] = None

    def __post_init__(self):
        if self.derivative is not None:
            self._validate_derivative()

    def _validate_derivative(self):
        lo = max(self.domain.lo, -_FD_WINDOW)
        hi = min(self.domain.hi, _FD_WINDOW)
        span = hi - lo
        # Stay clear of the window edges so difference stencils fit.
        lo += 0.01 * span
        hi -= 0.01 * span
        rng = np.random.default_rng(_FD_SEED)
        ts = rng.uniform(lo, hi, size=_FD_POINTS)
        h = 1e-6 * np.maximum(1.0, np.abs(ts))
        h = np.minimum(h, 0.49 * np.minimum(ts - self.domain.lo, self.domain.hi - ts))
        fd = (self.fn(ts + h) - self.fn(ts - h)) / (2.0 * h)
        d = np.asarray(self.derivative(ts), dtype=np.float64)
        err = np.abs(fd - d)
        bad = err > 1e-5 * np.maximum(1.0, np.abs(d))
        if np.any(bad):
            t_bad = ts[bad][0]
            raise InputError(
                f"derivative evaluator for {self.name!r} disagrees with finite "
                f"differences at t={t_bad:.6g}"
            )

    def __call__(self, t):
        return self.fn(t)

    def deriv(self, t):
        if self.derivative is None:
            raise InputError(f"function {self.name!r} has no derivative evaluator")
        return self.derivative(t)

    def contains(self, t, tol: float = 0.0) -> bool:
        return self.domain.contains(t, tol)


def _make_builtins() -> dict:
    reg = {}
    reg["xexp"] = ScalarFunction(
        name="xexp",
        fn=lambda t: t * np.exp(t),
        derivative=lambda t: (1.0 + t) * np.exp(t),
    )
    reg["gauss1d"] = ScalarFunction(
        name="gauss1d",
        fn=lambda t: np.exp(-np.square(t)),
        derivative=lambda t: -2.0 * t * np.exp(-np.square(t)),
    )
    reg["log2"] = ScalarFunction(
        name="log2",
        fn=lambda t: np.square(np.log(t)),
        domain=Interval(0.0, math.inf, open_lo=True),
        derivative=lambda t: 2.0 * np.log(t) / t,
    )
    reg["square"] = ScalarFunction(
        name="square", fn=np.square, derivative=lambda t: 2.0 * t
    )
    # Kinks at t = +-1: no derivative evaluator on purpose.
    reg["absx2m1"] = ScalarFunction(
        name="absx2m1", fn=lambda t: np.abs(np.square(t) - 1.0)
    )
    return reg


_BUILTINS = _make_builtins()
BUILTIN_NAMES = tuple(sorted(_BUILTINS))


def builtin_function(name: str) -> ScalarFunction:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise InputError(
            f"unknown function {name!r}; built-ins are {', '.join(BUILTIN_NAMES)}"
        )


_EXPR_NAMES = {
    "abs": np.abs,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "maximum": np.maximum,
    "minimum": np.minimum,
    "pi": math.pi,
    "e": math.e,
}


def function_from_expression(expr: str, domain: Optional[Interval] = None) -> ScalarFunction:
    """Compile an expression in the variable ``t`` into a scalar function.

    Only arithmetic and a fixed set of elementary functions are allowed.
    No derivative is attached; operations that need one will say so.
    """
    try:
        code = compile(expr, "<function>", "eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse function expression {expr!r}: {exc}")
    for nm in code.co_names:
        if nm not in _EXPR_NAMES and nm not in ("t", "x"):
            raise InputError(f"name {nm!r} is not allowed in function expressions")

    def fn(t):
        return eval(code, {"__builtins__": {}}, {**_EXPR_NAMES, "t": t, "x": t})

    return ScalarFunction(
        name=expr, fn=fn, domain=domain or Interval(-math.inf, math.inf)
    )


@dataclass(frozen=True)
class SupportCertificate:
    """Affine line h(t) = slope*t + offset supporting f at base_point."""

    base_point: float
    slope: float
    offset: float
    region_lo: float
    region_hi: float
    min_margin: float
    grid_points: int
    refine_depth: int
    truncated: bool
    tol: float

    certified = True

    def line(self, t):
        return self.slope * np.asarray(t) + self.offset


@dataclass(frozen=True)
class Refuted:
    """Witness point where the candidate line rises above the graph."""

    witness: float
    f_value: float
    line_value: float
    margin: float

    certified = False


_CellQueueLimit = 512


def _effective_interval(region: Interval, domain: Interval, a: float, horizon: float):
    lo = max(region.lo, domain.lo)
    hi = min(region.hi, domain.hi)
    open_lo = (region.open_lo and lo == region.lo) or (domain.open_lo and lo == domain.lo)
    open_hi = (region.open_hi and hi == region.hi) or (domain.open_hi and hi == domain.hi)
    truncated = False
    if lo < a - horizon:
        lo, open_lo, truncated = a - horizon, False, True
    if hi > a + horizon:
        hi, open_hi, truncated = a + horizon, False, True
    if not lo < hi:
        raise DomainError("region does not intersect the function domain")
    span = hi - lo
    eps = 1e-12 * span
    if open_lo:
        lo += eps
    if open_hi:
        hi -= eps
    return lo, hi, truncated


def _pick_slope(f: ScalarFunction, a: float, ts: np.ndarray, fa: float) -> float:
    if f.derivative is not None:
        return float(f.deriv(a))
    dt = ts - a
    vals = np.asarray(f(ts), dtype=np.float64)
    tiny = 1e-9 * max(1.0, abs(a))
    left = dt < -tiny
    right = dt > tiny
    secants = (vals - fa) / np.where(dt == 0.0, 1.0, dt)
    s_lo = float(np.max(secants[left])) if np.any(left) else None
    s_hi = float(np.min(secants[right])) if np.any(right) else None
    if s_lo is None and s_hi is None:
        return 0.0
    if s_lo is None:
        return s_hi
    if s_hi is None:
        return s_lo
    return 0.5 * (s_lo + s_hi)


def support_line_certify(
    f: ScalarFunction,
    a: float,
    region: Interval,
    grid_points: int = 4096,
    refine_depth: int = 20,
    tol: float = DEFAULT_TOL,
    horizon: float = DEFAULT_HORIZON,
) -> Union[SupportCertificate, Refuted]:
    """Certify or refute a supporting line for f at ``a`` over ``region``.

    Unbounded regions are truncated to [a - horizon, a + horizon] and the
    certificate says so.  A Refuted result carries a concrete point where
    the line passes above the graph by more than ``tol``.
    """
    if not isinstance(region, Interval):
        raise DomainError("only interval regions are supported for certification")
    if not region.contains(a) or not f.contains(a):
        raise DomainError(f"base point {a} must lie inside the region and domain")
    lo, hi, truncated = _effective_interval(region, f.domain, a, horizon)
    if not (lo <= a <= hi):
        raise DomainError(f"base point {a} is outside the certifiable window [{lo}, {hi}]")

    fa = float(f(a))
    ts = np.linspace(lo, hi, grid_points)
    slope = _pick_slope(f, a, ts, fa)
    offset = fa - slope * a

    def margin_at(t):
        return np.asarray(f(t), dtype=np.float64) - (fa + slope * (np.asarray(t) - a))

    margins = margin_at(ts)
    if not np.all(np.isfinite(margins)):
        bad = ts[~np.isfinite(margins)][0]
        raise DomainError(f"function is not finite at t={bad:.6g}")

    worst = int(np.argmin(margins))
    min_margin = float(margins[worst])
    if min_margin < -tol:
        t_bad = float(ts[worst])
        return Refuted(
            witness=t_bad,
            f_value=float(f(t_bad)),
            line_value=fa + slope * (t_bad - a),
            margin=min_margin,
        )

    flag = 10.0 * tol
    cells = []
    for i in range(grid_points - 1):
        lo_m, hi_m = margins[i], margins[i + 1]
        if min(lo_m, hi_m) < flag:
            cells.append((float(ts[i]), float(ts[i + 1]), float(lo_m), float(hi_m)))

    depth_used = 0
    width_floor = 1e-12 * (hi - lo)
    for depth in range(refine_depth):
        if not cells:
            break
        depth_used = depth + 1
        if len(cells) > _CellQueueLimit:
            cells.sort(key=lambda c: min(c[2], c[3]))
            cells = cells[:_CellQueueLimit]
        mids = np.array([0.5 * (c[0] + c[1]) for c in cells])
        mid_margins = margin_at(mids)
        bad = np.nonzero(mid_margins < -tol)[0]
        if bad.size:
            t_bad = float(mids[bad[0]])
            return Refuted(
                witness=t_bad,
                f_value=float(f(t_bad)),
                line_value=fa + slope * (t_bad - a),
                margin=float(mid_margins[bad[0]]),
            )
        min_margin = min(min_margin, float(np.min(mid_margins)))
        nxt = []
        for (c_lo, c_hi, m_lo, m_hi), mid, m_mid in zip(cells, mids, mid_margins):
            if c_hi - c_lo <= width_floor:
                continue
            if min(m_lo, m_mid) < flag:
                nxt.append((c_lo, float(mid), m_lo, float(m_mid)))
            if min(m_mid, m_hi) < flag:
                nxt.append((float(mid), c_hi, float(m_mid), m_hi))
        cells = nxt

    return SupportCertificate(
        base_point=a,
        slope=slope,
        offset=offset,
        region_lo=lo,
        region_hi=hi,
        min_margin=min_margin,
        grid_points=grid_points,
        refine_depth=depth_used,
        truncated=truncated,
        tol=tol,
    )


def convexity_boundary(
    f: ScalarFunction,
    a: float,
    direction: str = "right",
    tol: float = DEFAULT_TOL,
    horizon: float = DEFAULT_HORIZON,
) -> float:
    """Far root of f(t) - f(a) - f'(a)(t - a) in the given direction.

    This is where the tangent at ``a`` re-crosses the graph, i.e. the edge
    of the convexity neighborhood anchored at ``a``.  Returns +-inf when no
    crossing exists within the search horizon (a convex graph never meets
    its tangent again).
    """
    if direction not in ("left", "right"):
        raise InputError(f"direction must be 'left' or 'right', got {direction!r}")
    if f.derivative is None:
        raise InputError("boundary search needs a derivative evaluator")
    dom = f.domain
    if not dom.contains(a) or a <= dom.lo or a >= dom.hi:
        raise DomainError(f"base point {a} must be interior to the domain")

    sign = 1.0 if direction == "right" else -1.0
    fa = float(f(a))
    sa = float(f.deriv(a))

    def g(t):
        return float(f(t)) - fa - sa * (t - a)

    def dg(t):
        return float(f.deriv(t)) - sa

    if direction == "right":
        limit = min(a + horizon, dom.hi)
        if dom.open_hi or limit < dom.hi:
            limit -= 1e-12 * max(1.0, abs(limit))
    else:
        limit = max(a - horizon, dom.lo)
        if dom.open_lo or limit > dom.lo:
            limit += 1e-12 * max(1.0, abs(limit))

    floor = 1e-13 * max(1.0, abs(fa), abs(sa) * max(1.0, abs(a)))
    step = 1e-3 * max(1.0, abs(a))
    t_prev = a
    locked = 0
    bracket = None
    t = a + sign * step
    while sign * (t - a) <= horizon:
        if sign * (t - limit) > 0:
            t = limit
        gt = g(t)
        if abs(gt) > floor:
            s = 1 if gt > 0 else -1
            if locked == 0:
                locked = s
            elif s != locked:
                bracket = (t_prev, t)
                break
        t_prev = t
        if t == limit:
            break
        step *= 1.3
        t = t + sign * step

    if bracket is None:
        return math.inf * sign

    t_lo, t_hi = bracket
    g_lo = g(t_lo)
    for _ in range(200):
        mid = 0.5 * (t_lo + t_hi)
        if t_hi - t_lo == 0.0 or mid in (t_lo, t_hi):
            break
        g_mid = g(mid)
        if (g_mid > 0) == (g_lo > 0):
            t_lo, g_lo = mid, g_mid
        else:
            t_hi = mid
        if abs(t_hi - t_lo) < 1e-15 * max(1.0, abs(mid)):
            break

    b = 0.5 * (t_lo + t_hi)
    for _ in range(50):
        gb = g(b)
        if abs(gb) <= 1e-14 * max(1.0, abs(fa)):
            break
        slope = dg(b)
        if slope == 0.0:
            break
        nb = b - gb / slope
        if not (min(t_lo, t_hi) - 1.0 <= nb <= max(t_lo, t_hi) + 1.0):
            break
        if nb == b:
            break
        b = nb
    if abs(g(b)) > max(tol, 1e-9):
        raise DomainError(
            f"tangent-crossing refinement stalled at t={b:.9g} with residual {g(b):.3g}"
        )
    return float(b)


def jensen_at_point_verify(
    f: ScalarFunction, a: float, mu: WeightedMeasure, tol: float = DEFAULT_TOL
) -> bool:
    """Check f(a) <= mean of f under mu, for a measure with barycenter a."""
    if mu.dimension != 1:
        raise DomainError("pointwise Jensen checks are one-dimensional")
    b = float(barycenter(mu)[0])
    if abs(b - a) > tol:
        raise HypothesisError(f"measure barycenter {b} does not match base point {a}")
    return bool(float(f(a)) <= expectation(mu, f) + tol)


def random_convexity_falsifier(
    f: ScalarFunction,
    a: float,
    region: Interval,
    trials: int = 10000,
    seed: Optional[int] = None,
    tol: float = DEFAULT_TOL,
) -> Optional[WeightedMeasure]:
    """Search for a measure with barycenter ``a`` violating the Jensen bound.

    Alternates two-point measures (weights forced by the barycenter) with
    small random convex combinations whose last point is solved for.
    Returns the first violating measure, or None when all trials pass.
    """
    if not isinstance(region, Interval):
        raise DomainError("falsifier regions are intervals")
    if not region.contains(a) or not f.contains(a):
        raise DomainError(f"base point {a} must lie inside the region and domain")
    lo, hi, _ = _effective_interval(region, f.domain, a, horizon=math.inf)
    lo, hi = max(lo, a - 1e6), min(hi, a + 1e6)
    rng = np.random.default_rng(seed)
    fa = float(f(a))

    for trial in range(trials):
        if trial % 2 == 0 and lo < a < hi:
            t1 = lo + (a - lo) * rng.uniform(1e-6, 1.0 - 1e-6)
            t2 = a + (hi - a) * rng.uniform(1e-6, 1.0 - 1e-6)
            if t2 - t1 < 1e-9:
                continue
            w1 = (t2 - a) / (t2 - t1)
            if not 1e-12 < w1 < 1.0 - 1e-12:
                continue
            pts = np.array([[t1], [t2]])
            wts = np.array([w1, 1.0 - w1])
        else:
            k = int(rng.integers(3, 6))
            us = rng.uniform(lo, hi, size=k - 1)
            wts = rng.dirichlet(np.ones(k))
            t_last = (a - float(np.dot(wts[:-1], us))) / wts[-1]
            if not (lo <= t_last <= hi):
                continue
            pts = np.concatenate([us, [t_last]]).reshape(-1, 1)
        mu = WeightedMeasure(dimension=1, points=pts, weights=wts)
        if expectation(mu, f) < fa - tol:
            return mu
    return None
