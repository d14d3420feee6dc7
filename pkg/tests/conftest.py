import numpy as np
import pytest

from relconvex import kernels

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Compile (or load from cache) every jitted kernel before any test
    # that measures wall time runs.
    a_eq = np.array([[1.0, 1.0]])
    b_eq = np.array([1.0])
    kernels.phase1_simplex(a_eq, b_eq, 50)
    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    q = np.eye(2)
    kernels.jacobi_cycle(m, q, 1e-12, 30)
    coeffs = np.array([-1.0, 0.0, 1.0], dtype=np.complex128)
    z = np.array([0.9 + 0.1j, -0.9 - 0.1j])
    kernels.aberth_refine(coeffs, z, 1e-12, 50)
    comps = kernels.simplex_grid(4, 2)
    kernels.grid_scan(
        comps,
        1,
        np.array([1.0]),
        np.array([0.5, 0.5]),
        np.array([[0.0], [1.0]]),
        np.array([[0.5]]),
        0.0,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(8842101)


@pytest.fixture(scope="session")
def acceptance_report():
    def append(line):
        _ACCEPTANCE_LINES.append(line)

    return append


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
