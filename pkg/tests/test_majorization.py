"""Property-based checks for the classical majorization layer.

The central invariant: whenever is_majorized(x, y) holds, the transfer
construction must produce a verified doubly stochastic matrix A with
A y = x, and the averaged vector must win the convex-sum comparison for
any convex test function.  Random pairs are built two ways: by mixing
permutation matrices (guaranteed majorized) and by independent draws
with matched totals (either way).
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from relconvex import (
    DimensionMismatchError,
    DoublyStochasticMatrix,
    InputError,
    NotMajorizedError,
    decreasing_rearrangement,
    hlp_convex_sum_check,
    hlp_transfer_matrix,
    is_doubly_stochastic,
    is_majorized,
)

# Bounded so that exp() in the convex battery cannot amplify float noise
# past the slack tolerance.
finite_floats = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


def vectors(min_n=1, max_n=6):
    return hnp.arrays(
        np.float64,
        st.integers(min_value=min_n, max_value=max_n),
        elements=finite_floats,
    )


@st.composite
def majorized_pairs(draw):
    """(x, y) with x ≺ y by construction: x = (Σ θ_k P_k) y."""
    y = draw(vectors(min_n=2))
    n = y.size
    k = draw(st.integers(min_value=1, max_value=4))
    rng = np.random.default_rng(draw(st.integers(min_value=0, max_value=2**32 - 1)))
    theta = rng.dirichlet(np.ones(k))
    mix = np.zeros((n, n))
    for t in theta:
        mix += t * np.eye(n)[rng.permutation(n)]
    return mix @ y, y


@given(majorized_pairs())
@settings(max_examples=200, deadline=None)
def test_convex_mixture_is_majorized(pair):
    x, y = pair
    assert is_majorized(x, y, tol=1e-8)


@given(majorized_pairs())
@settings(max_examples=100, deadline=None)
def test_transfer_matrix_reconstructs(pair):
    x, y = pair
    a = hlp_transfer_matrix(x, y, tol=1e-8)
    assert is_doubly_stochastic(a.entries, tol=1e-9)
    assert np.max(np.abs(a.apply(y) - x)) <= 1e-8


@given(majorized_pairs())
@settings(max_examples=100, deadline=None)
def test_convex_sum_inequality(pair):
    x, y = pair
    for f in (np.abs, np.exp, lambda t: t**2, lambda t: np.maximum(t, 0.0)):
        assert hlp_convex_sum_check(x, y, f, tol=1e-6)


@given(vectors())
@settings(max_examples=100, deadline=None)
def test_majorization_is_reflexive(y):
    assert is_majorized(y, y)
    perm = np.random.default_rng(0).permutation(y.size)
    assert is_majorized(y[perm], y)


@given(vectors(min_n=2))
@settings(max_examples=100, deadline=None)
def test_mean_vector_is_bottom_element(y):
    x = np.full(y.size, y.mean())
    assert is_majorized(x, y, tol=1e-9)


def test_known_pairs():
    assert is_majorized([1.0, 1.0], [2.0, 0.0])
    assert not is_majorized([2.0, 0.0], [1.0, 1.0])
    assert not is_majorized([1.0, 1.0], [1.5, 0.0])  # totals differ
    assert is_majorized([2.0, 1.0, 1.0], [3.0, 1.0, 0.0])


def test_decreasing_rearrangement():
    np.testing.assert_allclose(
        decreasing_rearrangement([1.0, 3.0, 2.0]), [3.0, 2.0, 1.0]
    )


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionMismatchError):
        is_majorized([1.0, 2.0], [1.0, 2.0, 0.0])


def test_transfer_matrix_not_majorized_raises():
    with pytest.raises(NotMajorizedError):
        hlp_transfer_matrix([2.0, 0.0], [1.0, 1.0])


def test_transfer_matrix_known_example():
    # Halving splits (2, 0) exactly into (1, 1).
    a = hlp_transfer_matrix([1.0, 1.0], [2.0, 0.0])
    np.testing.assert_allclose(a.entries, [[0.5, 0.5], [0.5, 0.5]])


def test_transfer_matrix_identity_case():
    a = hlp_transfer_matrix([3.0, 1.0], [3.0, 1.0])
    np.testing.assert_allclose(a.entries, np.eye(2))


def test_transfer_handles_unsorted_inputs():
    x = np.array([0.5, 2.5, 1.0])
    y = np.array([0.0, 1.0, 3.0])
    assert is_majorized(x, y)
    a = hlp_transfer_matrix(x, y)
    np.testing.assert_allclose(a.apply(y), x, atol=1e-10)


def test_doubly_stochastic_validation():
    with pytest.raises(InputError):
        DoublyStochasticMatrix(order=2, entries=np.array([[0.9, 0.0], [0.1, 1.0]]))
    with pytest.raises(InputError):
        DoublyStochasticMatrix(order=2, entries=np.array([[1.1, -0.1], [-0.1, 1.1]]))
    d = DoublyStochasticMatrix(order=2, entries=np.array([[0.3, 0.7], [0.7, 0.3]]))
    np.testing.assert_allclose(d.apply(np.array([1.0, 0.0])), [0.3, 0.7])


def test_is_doubly_stochastic_rejects_rectangular():
    with pytest.raises(InputError):
        is_doubly_stochastic(np.ones((2, 3)) / 3.0)
