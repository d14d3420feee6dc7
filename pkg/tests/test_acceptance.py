"""Acceptance gate: eleven headline checks with pinned budgets.

Criteria 1-10 each run one reproduction entry under the frozen seed and
tolerance, assert it passes, and enforce its wall-time budget.  Criterion
11 runs the CLI end to end twice and requires byte-identical reports up
to the recorded wall time.  Every criterion registers a one-line verdict
that the terminal summary prints after the run.
"""

import json
import subprocess
import sys
import time

import pytest

from relconvex import reproduce

SEED = 2024
TOL = 1e-9

CRITERIA = [
    (1, "a-star", 0.010),
    (2, "r-star", 0.010),
    (3, "hlp-equivalence", 5.0),
    (4, "transport-oracle", 30.0),
    (5, "popoviciu", 5.0),
    (6, "gauss-lucas-cubic", 0.100),
    (7, "schur-horn", 10.0),
    (8, "trace-inequality", 10.0),
    (9, "borwein-girgensohn", 2.0),
    (10, "certification-soundness", 10.0),
]


def _register(acceptance_report, idx, name, passed, elapsed, budget):
    verdict = "PASS" if passed else "FAIL"
    line = (
        f"criterion {idx:2d} [{verdict}] {name:<26}"
        f"{elapsed * 1000.0:10.1f} ms  (budget {budget * 1000.0:.0f} ms)"
    )
    acceptance_report(line)
    print(line)


@pytest.mark.parametrize(
    "idx,name,budget", CRITERIA, ids=[f"{i:02d}-{n}" for i, n, _ in CRITERIA]
)
def test_criterion(idx, name, budget, acceptance_report):
    start = time.perf_counter()
    entry = reproduce.run_entry(name, seed=SEED, tol=TOL)
    elapsed = time.perf_counter() - start
    passed = bool(entry["passed"]) and elapsed < budget
    _register(acceptance_report, idx, name, passed, elapsed, budget)
    assert entry["passed"], (
        f"criterion {idx} ({name}): computed={entry['computed']!r} "
        f"expected={entry['expected']!r} details={entry['details']!r}"
    )
    assert elapsed < budget, (
        f"criterion {idx} ({name}): took {elapsed:.3f}s, budget {budget:.3f}s"
    )


def test_criterion_11_cli_reproduce_all(acceptance_report):
    budget = 120.0
    runs = []
    for _ in range(2):
        start = time.perf_counter()
        proc = subprocess.run(
            [sys.executable, "-m", "relconvex.cli", "reproduce", "all", "--json"],
            capture_output=True,
            text=True,
        )
        elapsed = time.perf_counter() - start
        runs.append((proc, elapsed))

    ok = all(p.returncode == 0 and t < budget for p, t in runs)
    texts = [
        "\n".join(ln for ln in p.stdout.splitlines() if '"wall_time_s"' not in ln)
        for p, _ in runs
    ]
    ok = ok and texts[0] == texts[1]
    _register(
        acceptance_report, 11, "cli-reproduce-all", ok, runs[0][1], budget
    )

    for proc, elapsed in runs:
        assert proc.returncode == 0, proc.stderr
        assert elapsed < budget, f"reproduce all took {elapsed:.1f}s"
    assert texts[0] == texts[1], "reports differ under the same seed"

    report = json.loads(runs[0][0].stdout)
    assert report["result"]["all_passed"] is True
    assert len(report["result"]["entries"]) == 10
