"""The sextic witness families and the named inequality verifiers.

The witness construction is the load-bearing piece: for any triplet it
must produce a majorized pair of six-vectors whose convex-sum comparison
IS the three-point inequality.  That makes the inequality a corollary of
the majorization machinery, and the two routes (direct verification vs.
transfer through the majorization layer) must agree.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relconvex import (
    HypothesisError,
    InputError,
    bnl_triplet_verify,
    borwein_girgensohn_verify,
    builtin_function,
    classical_as_measures,
    empirical_from_samples,
    generalized_hlp_verify,
    is_majorized,
    popoviciu_verify,
    popoviciu_witness,
    probabilistic_jensen_verify,
    witness_majorization_holds,
    xexp_weighted_jensen_verify,
)

triplet_floats = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


@given(triplet_floats, triplet_floats, triplet_floats)
@settings(max_examples=300, deadline=None)
def test_witness_majorization_and_sum_identity(a, b, c):
    w = popoviciu_witness(a, b, c)
    x, y = w.as_arrays()
    assert x.shape == (6,) and y.shape == (6,)
    assert witness_majorization_holds(w, tol=1e-9)
    scale = max(1.0, abs(a), abs(b), abs(c))
    assert abs(x.sum() - y.sum()) <= 1e-12 * scale


@given(triplet_floats, triplet_floats, triplet_floats)
@settings(max_examples=200, deadline=None)
def test_three_point_inequality_for_square(a, b, c):
    f = builtin_function("square")
    assert popoviciu_verify(f, a, b, c, tol=1e-7)


@given(
    st.floats(min_value=0.05, max_value=2.0),
    st.floats(min_value=0.05, max_value=2.0),
    st.floats(min_value=0.05, max_value=2.0),
)
@settings(max_examples=200, deadline=None)
def test_three_point_inequality_for_squared_log(a, b, c):
    # Points in (0, 2] keep all midpoints inside (0, 2], where the
    # squared logarithm admits the needed supporting lines.
    f = builtin_function("log2")
    assert popoviciu_verify(f, a, b, c, tol=1e-7)


@given(triplet_floats, triplet_floats, triplet_floats)
@settings(max_examples=100, deadline=None)
def test_witness_routes_agree(a, b, c):
    """Direct three-point verify vs. transfer through the transport layer."""
    w = popoviciu_witness(a, b, c)
    mu_x, mu_y = classical_as_measures(w.x_family, w.y_family)
    f = builtin_function("square")
    via_transport = generalized_hlp_verify(
        lambda pts: pts[:, 0] ** 2, mu_x, mu_y, tol=1e-7
    )
    direct = popoviciu_verify(f, a, b, c, tol=1e-7)
    assert via_transport and direct


def test_witness_known_family():
    w = popoviciu_witness(6.0, 1.0, -1.0)
    x, y = w.as_arrays()
    np.testing.assert_allclose(x, [3.5, 3.5, 2.5, 2.5, 0.0, 0.0])
    np.testing.assert_allclose(y, [6.0, 2.0, 2.0, 2.0, 1.0, -1.0])
    assert w.case_tag == "mean_above_middle"
    assert is_majorized(x, y)


def test_witness_other_case():
    # mean below the middle value
    w = popoviciu_witness(9.0, 9.0, 0.0)
    assert w.case_tag == "middle_above_mean"
    assert witness_majorization_holds(w)


def test_popoviciu_rejects_points_outside_domain():
    f = builtin_function("log2")
    with pytest.raises(Exception):
        popoviciu_verify(f, -1.0, 1.0, 2.0)


class TestWeightedXexp:
    def test_valid_instance(self):
        assert xexp_weighted_jensen_verify([0.5, 0.5], [-4.0, 2.0])

    def test_barycenter_outside_region(self):
        with pytest.raises(HypothesisError, match=r"\[-1, inf\)"):
            xexp_weighted_jensen_verify([0.5, 0.5], [-4.0, 0.0])

    def test_weights_must_be_probabilities(self):
        with pytest.raises(InputError):
            xexp_weighted_jensen_verify([0.7, 0.7], [0.0, 0.0])
        with pytest.raises(InputError):
            xexp_weighted_jensen_verify([1.5, -0.5], [0.0, 0.0])

    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=150, deadline=None)
    def test_random_instances_hold(self, n, seed):
        rng = np.random.default_rng(seed)
        lam = rng.dirichlet(np.ones(n))
        x = rng.uniform(-3.0, 3.0, size=n)
        bary = float(lam @ x)
        if bary < -1.0:
            x = x + (-1.0 - bary + 0.05)
        assert xexp_weighted_jensen_verify(lam, x, tol=1e-9)


class TestBorweinGirgensohn:
    def test_signature_pair(self):
        assert borwein_girgensohn_verify([1.0, -1.0])

    def test_zero_vector(self):
        assert borwein_girgensohn_verify([0.0, 0.0, 0.0])

    def test_negative_sum_raises(self):
        with pytest.raises(HypothesisError):
            borwein_girgensohn_verify([-1.0, 0.5])

    def test_empty_raises(self):
        with pytest.raises(InputError):
            borwein_girgensohn_verify([])

    @given(st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=200, deadline=None)
    def test_random_nonnegative_sum(self, n, seed):
        rng = np.random.default_rng(seed)
        x = rng.uniform(-2.0, 2.0, size=n)
        if x.sum() < 0:
            x = -x
        assert borwein_girgensohn_verify(x, tol=1e-9)


class TestBnlTriplets:
    def test_valid_instance(self):
        assert bnl_triplet_verify([1.0, 1.0, 1.0], [2.0, 1.0, 0.5])

    def test_sum_condition_named(self):
        with pytest.raises(HypothesisError, match="sum condition"):
            bnl_triplet_verify([3.0, 3.0, 3.0], [2.0, 1.0, 0.5])

    def test_pairwise_condition_named(self):
        with pytest.raises(HypothesisError, match="pairwise-product"):
            bnl_triplet_verify([20.0, 10.0, 0.005], [1e4, 0.01, 0.01])

    def test_product_condition_named(self):
        with pytest.raises(HypothesisError, match="product condition"):
            bnl_triplet_verify([1.0, 1.0, 1.0], [2.0, 2.0, 2.0])

    def test_positivity_required(self):
        with pytest.raises(InputError):
            bnl_triplet_verify([1.0, -1.0, 1.0], [1.0, 1.0, 1.0])

    def test_non_triplet_rejected(self):
        with pytest.raises(InputError):
            bnl_triplet_verify([1.0, 1.0], [1.0, 1.0])


class TestProbabilisticJensen:
    def test_report_from_samples(self):
        rng = np.random.default_rng(5)
        samples = rng.normal(0.5, 1.0, size=400)
        rep = probabilistic_jensen_verify(samples, builtin_function("square"))
        assert rep.verdict
        assert rep.mean_of_f >= rep.f_of_mean
        assert rep.mean == pytest.approx(samples.mean())

    def test_report_from_measure(self):
        mu = empirical_from_samples([0.0, 1.0, 2.0])
        rep = probabilistic_jensen_verify(mu, builtin_function("xexp"))
        assert rep.verdict
        assert rep.truncation_level is None

    def test_truncation_recorded(self):
        rep = probabilistic_jensen_verify(
            [0.0, 100.0], builtin_function("square"), truncation_level=3.0
        )
        assert rep.truncation_level == 3.0
        # 100 clamps to 3, so the mean reflects the truncated variable
        assert rep.mean == pytest.approx(1.5)

    def test_dict_keys(self):
        rep = probabilistic_jensen_verify([0.0, 1.0], builtin_function("square"))
        assert set(rep.to_dict()) == {
            "mean",
            "f_of_mean",
            "mean_of_f",
            "verdict",
            "truncation_level",
        }
