"""Certification, refutation, and boundary search for convexity points.

Ground truth used here, all reproducible by hand from the defining
equations:

* (log t)^2 has tangent contact again at a* = 5.4958698747... when the
  base point is 2, satisfying log^2 a* = log^2 2 + (log 2)(a* - 2).
* exp(-t^2) with base point 1/2 meets its tangent again at
  r* = 1.1838026237..., where exp(-1/4)(3/2 - r*) = exp(-r*^2).
* t exp(t) is convex on [-2, oo), so tangents at -1, 0, 1 support it
  there, while the tangent at -3 is crossed.
"""

import math

import numpy as np
import pytest

from relconvex import (
    BUILTIN_NAMES,
    HypothesisError,
    InputError,
    Interval,
    Refuted,
    ScalarFunction,
    SupportCertificate,
    WeightedMeasure,
    builtin_function,
    convexity_boundary,
    function_from_expression,
    jensen_at_point_verify,
    random_convexity_falsifier,
    support_line_certify,
)
from relconvex.errors import DomainError

A_STAR = 5.4958698747059139
R_STAR = 1.1838026237520207


def test_builtin_inventory():
    assert BUILTIN_NAMES == ("absx2m1", "gauss1d", "log2", "square", "xexp")
    with pytest.raises(InputError):
        builtin_function("cube")


def test_builtin_values():
    assert builtin_function("square")(3.0) == pytest.approx(9.0)
    assert builtin_function("xexp")(1.0) == pytest.approx(math.e)
    assert builtin_function("gauss1d")(0.0) == pytest.approx(1.0)
    assert builtin_function("log2")(math.e) == pytest.approx(1.0)
    assert builtin_function("absx2m1")(0.5) == pytest.approx(0.75)


def test_log2_domain_is_positive_axis():
    f = builtin_function("log2")
    assert not f.contains(0.0)
    assert f.contains(1e-8)
    assert not f.contains(-1.0)


def test_scalar_function_rejects_wrong_derivative():
    with pytest.raises(InputError):
        ScalarFunction(
            name="broken",
            fn=lambda t: t**2,
            derivative=lambda t: 3.0 * t,  # should be 2t
        )


def test_expression_function_matches_builtin():
    f = function_from_expression("t*exp(t)")
    g = builtin_function("xexp")
    for t in (-2.0, -0.5, 0.0, 1.3):
        assert f(t) == pytest.approx(g(t), abs=1e-12)


def test_expression_rejects_non_whitelisted_names():
    with pytest.raises(InputError):
        function_from_expression("__import__('os').getcwd()")
    with pytest.raises(InputError):
        function_from_expression("open('x')")


class TestCertify:
    @pytest.mark.parametrize("a", [-1.0, 0.0, 1.0])
    def test_xexp_certified_on_window(self, a):
        f = builtin_function("xexp")
        out = support_line_certify(f, a, Interval(-20.0, 20.0))
        assert isinstance(out, SupportCertificate)
        assert out.certified
        assert out.min_margin >= -out.tol
        # the line touches the graph at the base point
        assert out.line(a) == pytest.approx(f(a), abs=1e-12)

    def test_xexp_refuted_at_minus_three(self):
        f = builtin_function("xexp")
        out = support_line_certify(f, -3.0, Interval(-20.0, 20.0))
        assert isinstance(out, Refuted)
        assert not out.certified
        assert out.margin < -1e-9
        assert f(out.witness) == pytest.approx(out.f_value)
        assert out.f_value < out.line_value


    def test_certified_margins_hold_on_dense_sample(self):
        f = builtin_function("xexp")
        cert = support_line_certify(f, -1.0, Interval(-20.0, 20.0))
        ts = np.linspace(cert.region_lo, cert.region_hi, 40001)
        margins = f.fn(ts) - (cert.slope * (ts - cert.base_point) + cert.offset)
        assert margins.min() >= -10 * cert.tol

    def test_log2_region_inside_boundary_certified(self):
        f = builtin_function("log2")
        out = support_line_certify(f, 2.0, Interval(0.1, A_STAR - 1e-3))
        assert out.certified

    def test_log2_region_past_boundary_refuted(self):
        f = builtin_function("log2")
        out = support_line_certify(f, 2.0, Interval(0.1, A_STAR + 1e-1))
        assert not out.certified
        assert out.witness > A_STAR

    def test_unbounded_region_is_truncated(self):
        f = builtin_function("square")
        out = support_line_certify(f, 0.0, Interval(-math.inf, math.inf))
        assert out.certified
        assert out.truncated

    def test_kink_point_refutes_every_slope(self):
        # Supporting |t^2-1| at t=0 on [-2, 2] would need slope <= -1 and
        # >= +1 at the two kinks simultaneously; no line works.
        f = builtin_function("absx2m1")
        out = support_line_certify(f, 0.0, Interval(-2.0, 2.0))
        assert not out.certified


class TestBoundary:
    def test_log2_right_boundary(self):
        f = builtin_function("log2")
        b = convexity_boundary(f, 2.0, "right")
        assert b == pytest.approx(A_STAR, abs=1e-6)
        resid = math.log(b) ** 2 - math.log(2.0) ** 2 - math.log(2.0) * (b - 2.0)
        assert abs(resid) <= 1e-9

    def test_gauss_right_boundary(self):
        f = builtin_function("gauss1d")
        b = convexity_boundary(f, 0.5, "right")
        assert b == pytest.approx(R_STAR, abs=1e-5)
        resid = math.exp(-0.25) * (1.5 - b) - math.exp(-b * b)
        assert abs(resid) <= 1e-9

    def test_square_is_unbounded_both_ways(self):
        f = builtin_function("square")
        assert convexity_boundary(f, 1.0, "right") == math.inf
        assert convexity_boundary(f, 1.0, "left") == -math.inf

    def test_xexp_left_boundary_cases(self):
        # Tangent at -1 is the global-minimum line of t e^t, so it is never
        # crossed; tangent at -1.5 slopes downward and the function's far
        # left tail (values near 0) rises back above it.
        f = builtin_function("xexp")
        assert convexity_boundary(f, -1.0, "left") == -math.inf
        b = convexity_boundary(f, -1.5, "left")
        assert b < -2.0
        g = f(b) - f(-1.5) - f.deriv(-1.5) * (b + 1.5)
        assert abs(g) <= 1e-9

    def test_boundary_outside_domain_raises(self):
        f = builtin_function("log2")
        with pytest.raises(DomainError):
            convexity_boundary(f, -1.0, "right")

    def test_boundary_agrees_with_certify(self):
        # Just inside the boundary the certificate exists, just past it
        # the same base point is refuted.
        f = builtin_function("log2")
        b = convexity_boundary(f, 2.0, "right")
        inside = support_line_certify(f, 2.0, Interval(1.0, b - 1e-3))
        outside = support_line_certify(f, 2.0, Interval(1.0, b + 1e-1))
        assert inside.certified and not outside.certified


def two_point_measure(t1, t2, w1):
    return WeightedMeasure(
        dimension=1,
        points=np.array([[t1], [t2]]),
        weights=np.array([w1, 1.0 - w1]),
    )


class TestJensenAtPoint:
    def test_holds_at_certified_point(self):
        f = builtin_function("xexp")
        mu = two_point_measure(-4.0, 2.0, 0.5)  # barycenter -1
        assert jensen_at_point_verify(f, -1.0, mu)

    def test_fails_at_concave_point(self):
        f = builtin_function("xexp")
        mu = two_point_measure(-4.0, -2.0, 0.5)  # barycenter -3
        assert not jensen_at_point_verify(f, -3.0, mu)

    def test_barycenter_mismatch_raises(self):
        f = builtin_function("xexp")
        mu = two_point_measure(0.0, 1.0, 0.5)
        with pytest.raises(HypothesisError):
            jensen_at_point_verify(f, -1.0, mu)


class TestFalsifier:
    def test_finds_counterexample_at_concave_point(self):
        f = builtin_function("xexp")
        mu = random_convexity_falsifier(
            f, -3.0, Interval(-20.0, 20.0), trials=2000, seed=42
        )
        assert mu is not None
        # returned measure really violates the point inequality
        assert not jensen_at_point_verify(f, -3.0, mu)

    def test_finds_nothing_where_certificate_exists(self):
        f = builtin_function("xexp")
        mu = random_convexity_falsifier(
            f, -1.0, Interval(-20.0, 20.0), trials=2000, seed=7
        )
        assert mu is None

    def test_seed_reproducibility(self):
        f = builtin_function("xexp")
        a = random_convexity_falsifier(f, -3.0, Interval(-20.0, 20.0), trials=500, seed=3)
        b = random_convexity_falsifier(f, -3.0, Interval(-20.0, 20.0), trials=500, seed=3)
        np.testing.assert_array_equal(a.points, b.points)
        np.testing.assert_array_equal(a.weights, b.weights)


def test_radial_bump_reduces_to_profile():
    """Tangent-plane margins of the 2-d bump exp(-|w|^2) against the
    tangent-line margins of the 1-d profile exp(-t^2).

    The plane at p = (1/2, 0) only sees the first coordinate, so on the
    axis the two margins agree exactly, and off the axis the 2-d margin
    can only drop (the second coordinate shrinks the bump but leaves the
    plane alone).  This is what makes disc statements reducible to the
    1-d profile on a ray.
    """
    p = np.array([0.5, 0.0])
    fp = math.exp(-0.25)
    grad = -2.0 * p * fp

    def plane(w):
        return fp + grad @ (w - p)

    profile = builtin_function("gauss1d")
    line_at = profile.deriv(0.5)

    radii = np.linspace(0.0, 2.0, 41)
    angles = np.linspace(0.0, 2.0 * math.pi, 73)
    for r in radii:
        for th in angles:
            w = np.array([r * math.cos(th), r * math.sin(th)])
            margin_2d = math.exp(-(w @ w)) - plane(w)
            margin_1d = profile(w[0]) - (fp + line_at * (w[0] - 0.5))
            if abs(w[1]) < 1e-12:
                assert margin_2d == pytest.approx(margin_1d, abs=1e-8)
            else:
                assert margin_2d <= margin_1d + 1e-12
