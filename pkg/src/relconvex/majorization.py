"""Classical vector majorization and doubly stochastic transfer certificates.

``x`` is majorized by ``y`` when every partial sum of the decreasing
rearrangement of ``x`` is at most the corresponding partial sum for ``y``
and the totals agree.  The constructive bridge to doubly stochastic
matrices goes through a finite sequence of two-coordinate averaging steps
(Robin-Hood transfers): each step moves mass from the largest entry still
above target to the smallest entry still below it, fixing at least one
coordinate, so at most len(x) - 1 steps are needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._defaults import DEFAULT_TOL
from .errors import DimensionMismatchError, DomainError, InputError, NotMajorizedError

__all__ = [
    "DoublyStochasticMatrix",
    "decreasing_rearrangement",
    "is_majorized",
    "hlp_transfer_matrix",
    "is_doubly_stochastic",
    "hlp_convex_sum_check",
]

ENTRY_TOL = 1e-12


@dataclass(frozen=True)
class DoublyStochasticMatrix:
    """Square nonnegative matrix with unit row and column sums."""

    order: int
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.float64)
        if a.shape != (self.order, self.order):
            raise DimensionMismatchError(
                f"expected a {self.order}x{self.order} matrix, got {a.shape}"
            )
        if not _doubly_stochastic_entries(a, ENTRY_TOL):
            raise InputError("entries do not form a doubly stochastic matrix")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    def apply(self, y: np.ndarray) -> np.ndarray:
        return self.entries @ np.asarray(y, dtype=np.float64)


def _doubly_stochastic_entries(a: np.ndarray, tol: float) -> bool:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    if np.min(a) < -tol:
        return False
    if np.max(np.abs(a.sum(axis=1) - 1.0)) > tol:
        return False
    return bool(np.max(np.abs(a.sum(axis=0) - 1.0)) <= tol)


def decreasing_rearrangement(x) -> np.ndarray:
    """Entries of ``x`` sorted in decreasing order (stable over ties)."""
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise InputError("empty vector")
    return arr[np.argsort(-arr, kind="stable")]


def is_majorized(x, y, tol: float = DEFAULT_TOL) -> bool:
    """True when x's sorted partial sums stay at or below y's, totals equal.

    Comparisons use the absolute tolerance ``tol``.
    """
    xa = np.asarray(x, dtype=np.float64).reshape(-1)
    ya = np.asarray(y, dtype=np.float64).reshape(-1)
    if xa.shape != ya.shape:
        raise DimensionMismatchError(
            f"length mismatch: {xa.shape[0]} vs {ya.shape[0]}"
        )
    cx = np.cumsum(decreasing_rearrangement(xa))
    cy = np.cumsum(decreasing_rearrangement(ya))
    if abs(cx[-1] - cy[-1]) > tol:
        return False
    return bool(np.all(cx[:-1] <= cy[:-1] + tol))


def hlp_transfer_matrix(x, y, tol: float = DEFAULT_TOL) -> DoublyStochasticMatrix:
    """Doubly stochastic A with A @ y ~= x, built from Robin-Hood transfers.

    Any valid certificate is acceptable; this construction works on the
    decreasing rearrangements and conjugates the composed transfer matrix
    by the two sorting permutations at the end.  Raises when x is not
    majorized by y.
    """
    xa = np.asarray(x, dtype=np.float64).reshape(-1)
    ya = np.asarray(y, dtype=np.float64).reshape(-1)
    if xa.shape != ya.shape:
        raise DimensionMismatchError(
            f"length mismatch: {xa.shape[0]} vs {ya.shape[0]}"
        )
    if not is_majorized(xa, ya, tol):
        raise NotMajorizedError("x is not majorized by y")
    n = xa.shape[0]
    perm_x = np.argsort(-xa, kind="stable")
    perm_y = np.argsort(-ya, kind="stable")
    xd = xa[perm_x]
    v = ya[perm_y].copy()

    scale = max(1.0, float(np.max(np.abs(ya))))
    eps = 1e-13 * scale
    composed = np.eye(n)
    for _ in range(n - 1):
        over = np.nonzero(v > xd + eps)[0]
        if over.size == 0:
            break
        j = int(over[-1])
        under = np.nonzero(v[j + 1 :] < xd[j + 1 :] - eps)[0]
        if under.size == 0:
            break
        k = j + 1 + int(under[0])
        delta = min(v[j] - xd[j], xd[k] - v[k])
        t = delta / (v[j] - v[k])
        step = np.eye(n)
        step[j, j] = 1.0 - t
        step[j, k] = t
        step[k, j] = t
        step[k, k] = 1.0 - t
        composed = step @ composed
        v = step @ v

    if np.max(np.abs(v - xd)) > max(1e-10, tol):
        raise NotMajorizedError("transfer sequence did not reach the target vector")

    full = np.zeros((n, n))
    full[np.ix_(perm_x, perm_y)] = composed
    return DoublyStochasticMatrix(order=n, entries=full)


def is_doubly_stochastic(a, tol: float = ENTRY_TOL) -> bool:
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"expected a square matrix, got shape {arr.shape}")
    return _doubly_stochastic_entries(arr, tol)


def hlp_convex_sum_check(x, y, f, tol: float = DEFAULT_TOL) -> bool:
    """Check sum f(x_i) <= sum f(y_i) + tol for a convex test function."""
    xa = np.asarray(x, dtype=np.float64).reshape(-1)
    ya = np.asarray(y, dtype=np.float64).reshape(-1)
    domain = getattr(f, "domain", None)
    if domain is not None:
        for t in np.concatenate([xa, ya]):
            if not domain.contains(t):
                raise DomainError(f"point {t} is outside the function domain")
    fx = np.asarray(f(xa), dtype=np.float64)
    fy = np.asarray(f(ya), dtype=np.float64)
    return bool(np.sum(fx) <= np.sum(fy) + tol)
