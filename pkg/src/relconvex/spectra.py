"""Symmetric-matrix functional calculus on top of a Jacobi eigensolver.

trace_f(A, f) = sum of f over the eigenvalues of A.  The convexity split
of t*e^t at its inflection point -2 induces the two spectrum classes used
by the averaged trace inequality: spectra within (-inf, -2] (where the
trace functional is concave) and within [-2, inf) (where it is convex).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._defaults import DEFAULT_TOL
from .errors import DimensionMismatchError, DomainError, HypothesisError, InputError
from .kernels import jacobi_cycle
from .majorization import is_majorized
from .measures import Interval
from .convexity import builtin_function

__all__ = [
    "SymmetricMatrix",
    "EigenDecomposition",
    "jacobi_eigen",
    "trace_f",
    "spectrum_in",
    "trace_inequality_verify",
    "schur_horn_check",
    "LOWER_SPECTRUM",
    "UPPER_SPECTRUM",
]

# Spectrum classes induced by the inflection of t*e^t at t = -2.
LOWER_SPECTRUM = Interval(-math.inf, -2.0)
UPPER_SPECTRUM = Interval(-2.0, math.inf)

MAX_SWEEPS = 100


@dataclass(frozen=True)
class SymmetricMatrix:
    order: int
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.float64)
        if a.shape != (self.order, self.order):
            raise DimensionMismatchError(
                f"expected a {self.order}x{self.order} matrix, got shape {a.shape}"
            )
        if not np.all(np.isfinite(a)):
            raise InputError("matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(a))))
        if float(np.max(np.abs(a - a.T))) > 1e-12 * scale:
            raise InputError("matrix is not symmetric")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_dict(cls, data: dict) -> "SymmetricMatrix":
        try:
            n = int(data["n"])
            entries = np.asarray(data["entries"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"matrix object needs 'n' and 'entries': {exc}")
        return cls(order=n, entries=entries)

    def to_dict(self) -> dict:
        return {"n": self.order, "entries": self.entries.tolist()}


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # decreasing
    transform: np.ndarray  # orthogonal, columns are eigenvectors


def jacobi_eigen(mat: SymmetricMatrix, tol: float = 1e-12) -> EigenDecomposition:
    """Cyclic Jacobi diagonalization; eigenvalues come back decreasing.

    Stops when the off-diagonal Frobenius norm falls below tol times the
    Frobenius norm of the input (or after a fixed sweep cap; Jacobi
    converges quadratically, so the cap is generous).
    """
    a = mat.entries.copy()
    n = mat.order
    q = np.eye(n)
    norm = float(np.linalg.norm(a))
    if norm > 0.0:
        jacobi_cycle(a, q, tol * norm, MAX_SWEEPS)
    d = np.diag(a).copy()
    idx = np.argsort(-d, kind="stable")
    vals = d[idx]
    vals.flags.writeable = False
    vecs = q[:, idx].copy()
    vecs.flags.writeable = False
    return EigenDecomposition(eigenvalues=vals, transform=vecs)


def trace_f(mat: SymmetricMatrix, f, tol: float = 1e-12) -> float:
    """Sum of f over the spectrum of the matrix."""
    eig = jacobi_eigen(mat, tol).eigenvalues
    domain = getattr(f, "domain", None)
    if domain is not None:
        for e in eig:
            if not domain.contains(e, tol=1e-9):
                raise DomainError(f"eigenvalue {e} is outside the domain of f")
    return float(np.sum(np.asarray(f(eig), dtype=np.float64)))


def spectrum_in(mat: SymmetricMatrix, region: Interval, tol: float = DEFAULT_TOL) -> bool:
    """True when every eigenvalue lies in the interval, within tol."""
    eig = jacobi_eigen(mat).eigenvalues
    return all(region.contains(e, tol) for e in eig)


def trace_inequality_verify(
    lambdas: Sequence[float],
    mats: Sequence[SymmetricMatrix],
    tol: float = DEFAULT_TOL,
) -> bool:
    """Averaged trace comparison for f(t) = t*e^t.

    Hypotheses: every matrix has its spectrum inside (-inf, -2] or inside
    [-2, inf); the weighted mean matrix dominates -I in the Loewner order
    (min eigenvalue >= -1).  Conclusion: the weighted average of
    trace_f(A_k) is at least trace_f of the weighted mean.
    """
    w = np.asarray(lambdas, dtype=np.float64).reshape(-1)
    if len(mats) != w.shape[0]:
        raise InputError(f"{w.shape[0]} weights for {len(mats)} matrices")
    if np.any(w <= 0.0):
        raise InputError("weights must be strictly positive")
    if abs(float(np.sum(w)) - 1.0) > max(tol, 1e-9):
        raise InputError(f"weights must sum to 1, got {float(np.sum(w))}")
    n = mats[0].order
    for k, mat in enumerate(mats):
        if mat.order != n:
            raise DimensionMismatchError("all matrices must share one order")
        if not (
            spectrum_in(mat, LOWER_SPECTRUM, tol) or spectrum_in(mat, UPPER_SPECTRUM, tol)
        ):
            raise HypothesisError(
                f"matrix {k} has spectrum outside both (-inf,-2] and [-2,inf)"
            )
    mean_entries = np.zeros((n, n))
    for wk, mat in zip(w, mats):
        mean_entries += wk * mat.entries
    mean_mat = SymmetricMatrix(order=n, entries=mean_entries)
    min_eig = float(jacobi_eigen(mean_mat).eigenvalues[-1])
    if min_eig < -1.0 - tol:
        raise HypothesisError(
            f"mean matrix violates the -I bound: min eigenvalue {min_eig} < -1"
        )
    f = builtin_function("xexp")
    lhs = float(sum(wk * trace_f(mat, f) for wk, mat in zip(w, mats)))
    rhs = trace_f(mean_mat, f)
    return bool(lhs >= rhs - tol)


def schur_horn_check(mat: SymmetricMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Diagonal majorized by the eigenvalue vector."""
    eig = jacobi_eigen(mat).eigenvalues
    return is_majorized(np.diag(mat.entries), eig, tol)
