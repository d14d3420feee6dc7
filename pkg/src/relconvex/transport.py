"""Weighted majorization between discrete measures as LP feasibility.

A measure sum_i lam_i delta_{x_i} is weighted-majorized by
sum_j mu_j delta_{y_j} when some nonnegative m x n matrix A satisfies

    each row of A sums to 1,
    mu_j = sum_i A_ij lam_i        (weight transfer),
    x_i  = sum_j A_ij y_j          (each x_i a barycenter of the y_j).

Existence is decided by a phase-1 simplex over the flattened entries.
The row-sum equations plus equal total masses make one weight-transfer
equation redundant, so it is dropped from the constraint block.  A
brute-force oracle that scans row-simplex grids is provided for
cross-checking small instances; it is deliberately independent of the
simplex path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._defaults import DEFAULT_TOL
from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    MassMismatchError,
    NotMajorizedError,
)
from .kernels import grid_scan, phase1_simplex, simplex_grid
from .measures import WeightedMeasure, expectation

__all__ = [
    "RowStochasticCertificate",
    "FeasibilityVerdict",
    "ResidualReport",
    "weighted_majorization_decide",
    "verify_certificate",
    "generalized_hlp_verify",
    "grid_oracle_residual",
    "classical_as_measures",
]

ENTRY_TOL = 1e-12


@dataclass(frozen=True)
class ResidualReport:
    max_row_sum_dev: float
    max_weight_transfer_dev: float
    max_barycenter_dev: float
    min_entry: float

    def passes(self, tol: float) -> bool:
        return (
            self.min_entry >= -ENTRY_TOL
            and self.max_row_sum_dev <= tol
            and self.max_weight_transfer_dev <= tol
            and self.max_barycenter_dev <= tol
        )

    def worst(self) -> float:
        return max(
            self.max_row_sum_dev,
            self.max_weight_transfer_dev,
            self.max_barycenter_dev,
        )


@dataclass(frozen=True)
class RowStochasticCertificate:
    """The m x n witness matrix together with its residual report."""

    rows: int
    cols: int
    entries: np.ndarray
    residuals: ResidualReport

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.float64)
        if a.shape != (self.rows, self.cols):
            raise DimensionMismatchError(
                f"expected {self.rows}x{self.cols} entries, got {a.shape}"
            )
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries.tolist(),
            "residuals": {
                "row_sum": self.residuals.max_row_sum_dev,
                "weight_transfer": self.residuals.max_weight_transfer_dev,
                "barycenter": self.residuals.max_barycenter_dev,
                "min_entry": self.residuals.min_entry,
            },
        }


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    certificate: Optional[RowStochasticCertificate] = None
    phase1_objective: float = 0.0

    def __bool__(self) -> bool:
        return self.feasible


def _check_pair(mu_x: WeightedMeasure, mu_y: WeightedMeasure, tol: float):
    if mu_x.dimension != mu_y.dimension:
        raise DimensionMismatchError(
            f"measures live in different dimensions: {mu_x.dimension} vs {mu_y.dimension}"
        )
    if abs(mu_x.total_mass - mu_y.total_mass) > max(tol, tol * mu_y.total_mass):
        raise MassMismatchError(
            f"total masses differ: {mu_x.total_mass} vs {mu_y.total_mass}"
        )


def _compute_residuals(entries, lam, mu, xpts, ypts) -> ResidualReport:
    row_dev = float(np.max(np.abs(entries.sum(axis=1) - 1.0)))
    transfer_dev = float(np.max(np.abs(entries.T @ lam - mu)))
    bary_dev = float(np.max(np.abs(entries @ ypts - xpts)))
    return ResidualReport(
        max_row_sum_dev=row_dev,
        max_weight_transfer_dev=transfer_dev,
        max_barycenter_dev=bary_dev,
        min_entry=float(np.min(entries)),
    )


def weighted_majorization_decide(
    mu_x: WeightedMeasure, mu_y: WeightedMeasure, tol: float = DEFAULT_TOL
) -> FeasibilityVerdict:
    """Decide the weighted majorization relation between two measures.

    Requires equal dimensions and equal total masses (the masses are forced
    by the constraint system, so unequal masses are an input error rather
    than an infeasibility).  Feasibility threshold: phase-1 objective at or
    below rows * tol.
    """
    _check_pair(mu_x, mu_y, tol)
    m, n, d = mu_x.count, mu_y.count, mu_x.dimension
    lam = mu_x.weights
    mu = mu_y.weights
    xpts = mu_x.points
    ypts = mu_y.points

    nv = m * n
    k = m + (n - 1) + m * d
    a_eq = np.zeros((k, nv))
    b_eq = np.zeros(k)
    row = 0
    for i in range(m):
        a_eq[row, i * n : (i + 1) * n] = 1.0
        b_eq[row] = 1.0
        row += 1
    # One weight-transfer equation is implied by the others; drop the last.
    for j in range(n - 1):
        a_eq[row, j::n] = lam
        b_eq[row] = mu[j]
        row += 1
    for i in range(m):
        for c in range(d):
            a_eq[row, i * n : (i + 1) * n] = ypts[:, c]
            b_eq[row] = xpts[i, c]
            row += 1

    status, objective, flat = phase1_simplex(a_eq, b_eq, 200 * (k + nv))
    if status == 2:
        raise ConvergenceError(
            "phase-1 simplex hit its iteration cap", best=flat.reshape(m, n)
        )
    if objective > m * tol:
        return FeasibilityVerdict(feasible=False, phase1_objective=float(objective))

    entries = np.clip(flat.reshape(m, n), 0.0, None)
    report = _compute_residuals(entries, lam, mu, xpts, ypts)
    cert = RowStochasticCertificate(rows=m, cols=n, entries=entries, residuals=report)
    return FeasibilityVerdict(
        feasible=True, certificate=cert, phase1_objective=float(objective)
    )


def verify_certificate(
    cert: RowStochasticCertificate,
    mu_x: WeightedMeasure,
    mu_y: WeightedMeasure,
    tol: float = DEFAULT_TOL,
) -> ResidualReport:
    """Recompute all certificate residuals from scratch.

    Independent of the solver: uses only the stored entries and the two
    measures.  The caller decides pass or fail via ``report.passes(tol)``.
    """
    if cert.rows != mu_x.count or cert.cols != mu_y.count:
        raise DimensionMismatchError(
            f"certificate shape {cert.rows}x{cert.cols} does not match measures "
            f"{mu_x.count}x{mu_y.count}"
        )
    if mu_x.dimension != mu_y.dimension:
        raise DimensionMismatchError("measures live in different dimensions")
    return _compute_residuals(
        cert.entries, mu_x.weights, mu_y.weights, mu_x.points, mu_y.points
    )


def generalized_hlp_verify(
    f: Callable,
    mu_x: WeightedMeasure,
    mu_y: WeightedMeasure,
    tol: float = DEFAULT_TOL,
    certificate: Optional[RowStochasticCertificate] = None,
) -> bool:
    """Check sum_i lam_i f(x_i) <= sum_j mu_j f(y_j) + tol.

    The majorization relation must hold; it is established here (or a
    caller-supplied certificate is verified) before the inequality is
    evaluated.  Whether each x_i is a point of convexity of ``f`` is the
    caller's responsibility; this operation only verifies the conclusion.
    """
    if certificate is not None:
        report = verify_certificate(certificate, mu_x, mu_y, tol)
        if not report.passes(max(tol, 1e-6)):
            raise NotMajorizedError(
                f"supplied certificate fails verification (worst residual {report.worst():.3g})"
            )
    else:
        verdict = weighted_majorization_decide(mu_x, mu_y, tol)
        if not verdict.feasible:
            raise NotMajorizedError("measures not in majorization relation")
    lhs = expectation(mu_x, f) * mu_x.total_mass
    rhs = expectation(mu_y, f) * mu_y.total_mass
    return bool(lhs <= rhs + tol)


def grid_oracle_residual(
    mu_x: WeightedMeasure,
    mu_y: WeightedMeasure,
    resolution: int = 200,
    stop_below: float = 0.0,
) -> float:
    """Best max-residual over all candidate matrices on a row-simplex grid.

    Every row is drawn from the grid {0, 1/resolution, ..., 1} restricted to
    the probability simplex, so row sums are exact; the returned value is
    the smallest max deviation over the weight-transfer and barycenter
    conditions.  Exponential in the row count; intended for cross-checking
    instances with rows * cols <= 4.
    """
    _check_pair(mu_x, mu_y, tol=1e-6)
    m, n = mu_x.count, mu_y.count
    comps = simplex_grid(resolution, n)
    return float(
        grid_scan(
            comps,
            m,
            np.ascontiguousarray(mu_x.weights),
            np.ascontiguousarray(mu_y.weights),
            np.ascontiguousarray(mu_y.points),
            np.ascontiguousarray(mu_x.points),
            stop_below,
        )
    )


def classical_as_measures(x, y) -> tuple[WeightedMeasure, WeightedMeasure]:
    """Embed equal-length vectors as uniform 1-d measures (weights 1/n)."""
    xa = np.asarray(x, dtype=np.float64).reshape(-1, 1)
    ya = np.asarray(y, dtype=np.float64).reshape(-1, 1)
    if xa.shape != ya.shape:
        raise DimensionMismatchError("vectors must have equal length")
    n = xa.shape[0]
    w = np.full(n, 1.0 / n)
    return (
        WeightedMeasure(dimension=1, points=xa, weights=w),
        WeightedMeasure(dimension=1, points=ya, weights=w),
    )
