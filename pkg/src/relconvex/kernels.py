"""Numeric inner loops with a numba-accelerated and a pure-numpy path.

The hot kernels (phase-1 simplex pivoting, cyclic Jacobi sweeps, Aberth
root refinement, and the brute-force simplex-grid scan) are compiled with
``numba.njit`` when numba is importable.  The environment variable
``RELCONVEX_BACKEND`` selects the path:

    RELCONVEX_BACKEND=numpy   force the pure-numpy implementations
    RELCONVEX_BACKEND=numba   require numba (ImportError if missing)
    unset / auto              use numba when available

Both families are always importable under explicit names (``*_py`` and,
when numba is present, ``*_jit``) so they can be benchmarked against each
other; see ``benchmarks/compare_backends.py``.

All kernels take plain ndarrays and scalars and hold no global state.
"""

from __future__ import annotations

import os
from functools import lru_cache
from math import comb

import numpy as np

__all__ = [
    "BACKEND",
    "NUMBA_AVAILABLE",
    "phase1_simplex",
    "jacobi_cycle",
    "aberth_refine",
    "grid_scan",
    "simplex_grid",
]


def _resolve_backend() -> tuple[bool, str]:
    choice = os.environ.get("RELCONVEX_BACKEND", "auto").strip().lower()
    if choice in ("numpy", "python"):
        return False, "numpy"
    try:
        import numba  # noqa: F401

        available = True
    except ImportError:
        available = False
    if choice == "numba" and not available:
        raise ImportError("RELCONVEX_BACKEND=numba but numba is not installed")
    if choice not in ("auto", "", "numba"):
        raise ValueError(f"unknown RELCONVEX_BACKEND value: {choice!r}")
    return available, ("numba" if available else "numpy")


NUMBA_AVAILABLE, BACKEND = _resolve_backend()

if NUMBA_AVAILABLE:
    from numba import njit
else:  # pragma: no cover - exercised only without numba

    def njit(*args, **kwargs):
        raise RuntimeError("njit requested without numba")


# ---------------------------------------------------------------------------
# Phase-1 simplex for equality-constrained feasibility.
# ---------------------------------------------------------------------------

def phase1_simplex_py(a_eq, b_eq, max_iter):
    """Minimize the sum of artificial variables for A x = b, x >= 0.

    Dense tableau with Bland's rule (entering: smallest variable index with
    negative reduced cost; leaving: smallest basis index among minimal
    ratios), which precludes cycling on degenerate instances.

    Returns ``(status, objective, x)`` where status 0 means the phase-1
    optimum was reached, 2 means the iteration cap was hit.  ``x`` holds the
    structural variables only.
    """
    k, nv = a_eq.shape
    tab = np.zeros((k + 1, nv + k + 1))
    for i in range(k):
        if b_eq[i] < 0.0:
            for j in range(nv):
                tab[i, j] = -a_eq[i, j]
            tab[i, nv + k] = -b_eq[i]
        else:
            for j in range(nv):
                tab[i, j] = a_eq[i, j]
            tab[i, nv + k] = b_eq[i]
        tab[i, nv + i] = 1.0
    # Reduced-cost row for basis = artificials: r_j = -sum_i tab[i, j].
    for j in range(nv):
        s = 0.0
        for i in range(k):
            s += tab[i, j]
        tab[k, j] = -s
    s = 0.0
    for i in range(k):
        s += tab[i, nv + k]
    tab[k, nv + k] = -s

    basis = np.empty(k, dtype=np.int64)
    for i in range(k):
        basis[i] = nv + i

    eps = 1e-12
    status = 2
    for _ in range(max_iter):
        enter = -1
        for j in range(nv + k):
            if tab[k, j] < -eps:
                enter = j
                break
        if enter < 0:
            status = 0
            break
        leave = -1
        best_ratio = 0.0
        for i in range(k):
            coef = tab[i, enter]
            if coef > eps:
                ratio = tab[i, nv + k] / coef
                if leave < 0 or ratio < best_ratio - eps or (
                    ratio < best_ratio + eps and basis[i] < basis[leave]
                ):
                    leave = i
                    best_ratio = ratio
        if leave < 0:
            status = 1
            break
        piv = tab[leave, enter]
        tab[leave, :] /= piv
        for i in range(k + 1):
            if i != leave:
                factor = tab[i, enter]
                if factor != 0.0:
                    tab[i, :] -= factor * tab[leave, :]
        basis[leave] = enter

    x = np.zeros(nv)
    for i in range(k):
        if basis[i] < nv:
            x[basis[i]] = tab[i, nv + k]
    objective = -tab[k, nv + k]
    if objective < 0.0:
        objective = 0.0
    return status, objective, x


# ---------------------------------------------------------------------------
# Cyclic-by-row Jacobi sweeps for symmetric eigendecomposition.
# ---------------------------------------------------------------------------

def jacobi_cycle_py(a, q, eps_off, max_sweeps):
    """Run cyclic Jacobi sweeps in place until off(a)_F <= eps_off.

    ``a`` is reduced toward diagonal form; ``q`` (preloaded with the
    identity) accumulates the rotations so that A = q @ diag @ q.T on exit.
    Returns the number of sweeps performed.
    """
    n = a.shape[0]
    sweeps = 0
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        off = np.sqrt(2.0 * off)
        if off <= eps_off:
            break
        sweeps += 1
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if apr == 0.0:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                app = a[p, p]
                arr = a[r, r]
                a[p, p] = app - t * apr
                a[r, r] = arr + t * apr
                a[p, r] = 0.0
                a[r, p] = 0.0
                for i in range(n):
                    if i != p and i != r:
                        aip = a[i, p]
                        air = a[i, r]
                        a[i, p] = aip - s * (air + tau * aip)
                        a[p, i] = a[i, p]
                        a[i, r] = air + s * (aip - tau * air)
                        a[r, i] = a[i, r]
                for i in range(n):
                    qip = q[i, p]
                    qir = q[i, r]
                    q[i, p] = qip - s * (qir + tau * qip)
                    q[i, r] = qir + s * (qip - tau * qir)
    return sweeps


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous root refinement.
# ---------------------------------------------------------------------------

def aberth_refine_py(coeffs, z, tol_rel, max_iter):
    """Refine all roots of the monic polynomial with ascending ``coeffs``.

    Stops when every correction is below ``tol_rel`` relative to the root
    magnitude, or when every residual |p(z_j)| is at rounding level for its
    magnitude.  Returns ``(iterations, converged)``; ``z`` is updated in
    place.
    """
    n = z.shape[0]
    deg = coeffs.shape[0] - 1
    for it in range(max_iter):
        max_step = 0.0
        max_resid = 0.0
        for j in range(n):
            zj = z[j]
            p = coeffs[deg]
            dp = 0.0 + 0.0j
            for k in range(deg - 1, -1, -1):
                dp = dp * zj + p
                p = p * zj + coeffs[k]
            zmag = abs(zj)
            if zmag < 1.0:
                zmag = 1.0
            scale = zmag**deg
            resid = abs(p) / scale
            if resid > max_resid:
                max_resid = resid
            if resid <= 1e-16:
                continue
            if abs(dp) == 0.0:
                z[j] = zj + 1e-8 * (1.0 + zmag)
                max_step = 1.0
                continue
            w = p / dp
            s = 0.0 + 0.0j
            for k in range(n):
                if k != j:
                    diff = zj - z[k]
                    if abs(diff) == 0.0:
                        diff = 1e-12 * (1.0 + zmag)
                    s += 1.0 / diff
            denom = 1.0 - w * s
            if abs(denom) < 1e-30:
                delta = w
            else:
                delta = w / denom
            z[j] = zj - delta
            step = abs(delta) / (1.0 + abs(z[j]))
            if step > max_step:
                max_step = step
        if max_step <= tol_rel or max_resid <= 1e-15:
            return it + 1, True
    return max_iter, False


# ---------------------------------------------------------------------------
# Brute-force scan over products of row simplex grids (transport oracle).
# ---------------------------------------------------------------------------

def grid_scan_loop(comps, m, lam, mu, ypts, xpts, stop_below):
    """Minimum constraint residual over all row-grid matrix candidates.

    Every row of the m x n candidate is drawn from ``comps`` (each row of
    which sums to one), so row-sum residuals are zero by construction; the
    reported residual is the max deviation over the weight-transfer and
    barycenter conditions.  Scans the full odometer unless a candidate
    reaches ``stop_below``.
    """
    kk, n = comps.shape
    d = ypts.shape[1]
    best = np.inf
    idx = np.zeros(m, dtype=np.int64)
    while True:
        r = 0.0
        for j in range(n):
            s = 0.0
            for i in range(m):
                s += comps[idx[i], j] * lam[i]
            diff = abs(s - mu[j])
            if diff > r:
                r = diff
        for i in range(m):
            for c in range(d):
                s = 0.0
                for j in range(n):
                    s += comps[idx[i], j] * ypts[j, c]
                diff = abs(s - xpts[i, c])
                if diff > r:
                    r = diff
        if r < best:
            best = r
            if best <= stop_below:
                return best
        pos = m - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < kk:
                break
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            return best


def grid_scan_py(comps, m, lam, mu, ypts, xpts, stop_below):
    """Vectorized equivalent of :func:`grid_scan_loop`."""
    kk, n = comps.shape
    total = kk**m
    flat = np.arange(total)
    row_idx = np.stack(np.unravel_index(flat, (kk,) * m), axis=1)
    cand = comps[row_idx]  # (total, m, n)
    mu_hat = np.einsum("pmn,m->pn", cand, lam)
    r5 = np.max(np.abs(mu_hat - mu[None, :]), axis=1)
    bary = cand @ ypts  # (total, m, d)
    r6 = np.max(np.abs(bary - xpts[None, :, :]), axis=(1, 2))
    return float(np.min(np.maximum(r5, r6)))


@lru_cache(maxsize=16)
def simplex_grid(resolution: int, parts: int) -> np.ndarray:
    """All vectors with ``parts`` coordinates on the grid {0..resolution}/resolution summing to 1.

    Rows are lexicographic in the leading coordinates.  The array is cached
    and marked read-only; callers must not mutate it.
    """
    if parts < 1 or resolution < 1:
        raise ValueError("resolution and parts must be positive")
    count = comb(resolution + parts - 1, parts - 1)
    out = np.empty((count, parts), dtype=np.float64)

    def fill(offset: int, col: int, total: int) -> int:
        left = parts - col
        if left == 1:
            out[offset, col] = total
            return offset + 1
        if left == 2:
            k = np.arange(total + 1)
            out[offset : offset + total + 1, col] = k
            out[offset : offset + total + 1, col + 1] = total - k
            return offset + total + 1
        for first in range(total + 1):
            block = comb(total - first + left - 2, left - 2)
            out[offset : offset + block, col] = first
            offset = fill(offset, col + 1, total - first)
        return offset

    fill(0, 0, resolution)
    out /= float(resolution)
    out.flags.writeable = False
    return out


if NUMBA_AVAILABLE:
    _phase1_simplex_jit = njit(cache=True)(phase1_simplex_py)
    _jacobi_cycle_jit = njit(cache=True)(jacobi_cycle_py)
    _aberth_refine_jit = njit(cache=True)(aberth_refine_py)
    _grid_scan_jit = njit(cache=True)(grid_scan_loop)
    phase1_simplex_jit = _phase1_simplex_jit
    jacobi_cycle_jit = _jacobi_cycle_jit
    aberth_refine_jit = _aberth_refine_jit
    grid_scan_jit = _grid_scan_jit

if BACKEND == "numba":
    phase1_simplex = phase1_simplex_jit
    jacobi_cycle = jacobi_cycle_jit
    aberth_refine = aberth_refine_jit
    grid_scan = grid_scan_jit
else:
    phase1_simplex = phase1_simplex_py
    jacobi_cycle = jacobi_cycle_py
    aberth_refine = aberth_refine_py
    grid_scan = grid_scan_py
