"""Time the jit-compiled kernels against their pure-numpy twins.

Run from the repository root:

    python3 benchmarks/compare_backends.py [--repeats N]

Each kernel is warmed first so numba's compilation (or cache load) never
lands inside a measured interval.
"""

import argparse
import time

import numpy as np

from relconvex import kernels


def time_call(fn, args, repeats, setup=None):
    best = float("inf")
    for _ in range(repeats):
        ready = setup() if setup is not None else args
        start = time.perf_counter()
        fn(*ready)
        best = min(best, time.perf_counter() - start)
    return best


def bench_phase1(rng, repeats):
    # Transport-sized feasibility system: rows for row sums, weight
    # transfer, and barycenters of a (6, 8) instance.
    m, n, d = 6, 8, 2
    rows = rng.dirichlet(np.ones(n), size=m)
    lam = np.full(m, 1.0 / m)
    ypts = rng.uniform(-1.0, 1.0, size=(n, d))
    k = m + (n - 1) + m * d
    a_eq = np.zeros((k, m * n))
    b_eq = np.zeros(k)
    for i in range(m):
        a_eq[i, i * n : (i + 1) * n] = 1.0
        b_eq[i] = 1.0
    for j in range(n - 1):
        a_eq[m + j, j::n] = lam
        b_eq[m + j] = (rows.T @ lam)[j]
    for i in range(m):
        for t in range(d):
            a_eq[m + n - 1 + i * d + t, i * n : (i + 1) * n] = ypts[:, t]
            b_eq[m + n - 1 + i * d + t] = (rows @ ypts)[i, t]

    def make():
        return (a_eq.copy(), b_eq.copy(), 2000)

    return {
        "numpy": time_call(kernels.phase1_simplex_py, None, repeats, setup=make),
        "numba": time_call(kernels.phase1_simplex_jit, None, repeats, setup=make),
    }


def bench_jacobi(rng, repeats):
    n = 24
    base = rng.normal(size=(n, n))
    sym = (base + base.T) / 2.0
    eps = 1e-12 * np.linalg.norm(sym)

    def make():
        return (sym.copy(), np.eye(n), eps, 100)

    return {
        "numpy": time_call(kernels.jacobi_cycle_py, None, repeats, setup=make),
        "numba": time_call(kernels.jacobi_cycle_jit, None, repeats, setup=make),
    }


def bench_aberth(rng, repeats):
    deg = 24
    true = rng.normal(size=deg) + 1j * rng.normal(size=deg)
    coeffs = np.array([1.0 + 0.0j])
    for r in true:
        coeffs = np.convolve(coeffs, np.array([-r, 1.0]))
    coeffs = np.ascontiguousarray(coeffs[::-1])
    radius = 1.0 + np.max(np.abs(coeffs[:-1] / coeffs[-1]))
    init = 0.7 * radius * np.exp(2j * np.pi * np.arange(deg) / deg + 0.4j)

    def make():
        return (coeffs, init.copy(), 1e-12, 200)

    return {
        "numpy": time_call(kernels.aberth_refine_py, None, repeats, setup=make),
        "numba": time_call(kernels.aberth_refine_jit, None, repeats, setup=make),
    }


def bench_grid_scan(rng, repeats):
    m, n = 2, 2
    comps = kernels.simplex_grid(200, n)
    rows = rng.dirichlet(np.ones(n), size=m)
    lam = np.full(m, 1.0 / m)
    ypts = rng.uniform(-1.0, 1.0, size=(n, 1))
    args = (comps, m, lam, rows.T @ lam, ypts, rows @ ypts, -1.0)
    return {
        "numpy": time_call(kernels.grid_scan_py, args, repeats),
        "numba": time_call(kernels.grid_scan_jit, args, repeats),
    }


BENCHES = [
    ("phase1_simplex (6x8 transport LP)", bench_phase1),
    ("jacobi_cycle (n=24)", bench_jacobi),
    ("aberth_refine (degree 24)", bench_aberth),
    ("grid_scan (2x2, resolution 200)", bench_grid_scan),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    if not kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(20240)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<38} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for label, bench in BENCHES:
        bench(np.random.default_rng(20240), 1)  # warm both paths
        res = bench(rng, args.repeats)
        ratio = res["numpy"] / res["numba"] if res["numba"] > 0 else float("inf")
        print(
            f"{label:<38} {res['numpy'] * 1e3:>10.3f}ms {res['numba'] * 1e3:>10.3f}ms"
            f" {ratio:>8.1f}x"
        )


if __name__ == "__main__":
    main()
