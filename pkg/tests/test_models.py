"""Closed-form shape and saturation oracles, checked against mpmath and MC."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatlens.models import (
    Cone,
    Cuboid,
    Cylinder,
    HalfSpace,
    SphericalCapBoundary,
    Wedge,
    ball_overlap_relative_volume,
    choose_alpha,
    cuboid_hitting_probability,
    curvature_lower_bound,
    cylinder_tau_scaling,
    flat_tau,
    gaussian_isoperimetric_rhs,
    halfspace_hitting_probability,
    integral_curvature_lower_bound,
    isocap_constant,
    shape_relative_volume,
)
from heatlens.sampling import (
    BrownianConfig,
    estimate_hitting_probability,
    estimate_relative_volume,
)
from heatlens.special import relative_cap_volume, spherical_cap_volume, unit_ball_volume

mpmath.mp.dps = 50


def mp_phi(z: float) -> float:
    return float(mpmath.ncdf(z))


class TestShapeMembership:
    def test_halfspace(self):
        shape = HalfSpace(0.5)
        pts = np.array([[0.6, 0.0], [0.5, -3.0], [0.4, 9.0]])
        assert shape.contains(pts).tolist() == [True, True, False]

    def test_flat_cap_matches_halfspace(self):
        pts = np.random.default_rng(0).normal(size=(50, 4))
        flat = SphericalCapBoundary(0.3, None)
        assert np.array_equal(flat.contains(pts), HalfSpace(0.3).contains(pts))

    def test_outward_bend_is_a_ball(self):
        shape = SphericalCapBoundary(0.5, 2.0, bend=+1)
        pts = np.array([[0.5, 0.0], [0.4, 0.0], [3.0, 0.0], [0.5, 1.0]])
        assert shape.contains(pts).tolist() == [True, False, True, False]

    def test_inward_bend_wraps_laterally(self):
        shape = SphericalCapBoundary(0.5, 2.0, bend=-1)
        pts = np.array([[0.5, 0.0], [0.45, 0.0], [0.0, 0.0], [0.0, 2.0]])
        assert shape.contains(pts).tolist() == [True, False, False, True]

    def test_cap_validation(self):
        with pytest.raises(ValueError):
            SphericalCapBoundary(0.5, 2.0, bend=0)
        with pytest.raises(ValueError):
            SphericalCapBoundary(3.0, 2.0, bend=-1)
        with pytest.raises(ValueError):
            SphericalCapBoundary(0.5, -2.0)

    def test_cylinder(self):
        shape = Cylinder(rho=0.3, h=0.9, dist=0.1)
        pts = np.array(
            [
                [0.5, 0.2, 0.0],
                [0.05, 0.0, 0.0],
                [1.05, 0.0, 0.0],
                [0.5, 0.31, 0.0],
                [1.0, 0.2, 0.2],
            ]
        )
        assert shape.contains(pts).tolist() == [True, False, False, False, True]

    def test_wedge_uses_first_two_coordinates(self):
        shape = Wedge(math.pi / 2)
        pts = np.array([[1.0, 0.9, 50.0], [1.0, 1.1, 0.0], [1.0, -0.9, 0.0]])
        assert shape.contains(pts).tolist() == [True, False, True]

    def test_cone_uses_full_norm(self):
        shape = Cone(math.pi / 2)
        pts = np.array([[1.0, 0.9, 0.3], [1.0, 1.1, 0.3], [0.0, 0.0, 0.0]])
        assert shape.contains(pts).tolist() == [True, False, True]

    def test_cuboid(self):
        shape = Cuboid(0.2, (0.5, 1.0))
        pts = np.array([[0.3, 0.49], [0.3, 0.51], [0.1, 0.0], [0.71, 0.0]])
        assert shape.contains(pts).tolist() == [True, False, False, False]

    def test_cuboid_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            Cuboid(0.2, (0.5, 1.0)).contains(np.zeros((3, 3)))

    def test_angle_validation(self):
        for bad in (0.0, math.pi, -0.5, 4.0):
            with pytest.raises(ValueError):
                Wedge(bad)
            with pytest.raises(ValueError):
                Cone(bad)


class TestHalfspaceHitting:
    def test_against_normal_cdf_oracle(self):
        for d in (0.0, 0.1, 1.0, 3.0):
            for t in (0.1, 1.0, 2.5):
                want = float(2 * mpmath.ncdf(-d / mpmath.sqrt(t)))
                assert halfspace_hitting_probability(d, t) == pytest.approx(
                    want, abs=1e-10
                )

    def test_one_sigma_point(self):
        # 2*Phi(-1) to machine accuracy
        assert halfspace_hitting_probability(2.0, 4.0) == pytest.approx(
            0.31731050786291415, abs=1e-13
        )

    def test_domain(self):
        with pytest.raises(ValueError):
            halfspace_hitting_probability(-0.1, 1.0)
        with pytest.raises(ValueError):
            halfspace_hitting_probability(0.1, 0.0)


class TestFlatTau:
    def test_zero_distance_is_exactly_two(self):
        for n in (3, 4, 7, 20, 60):
            for r in (0.5, 1.0, 8.0):
                assert flat_tau(n, 0.0, r) == 2.0

    def test_dips_then_explodes(self):
        # the saturating power of psi decays faster than the cap volume at
        # first, so the curve sags below 2 before the volume collapse wins
        grid = np.linspace(0.0, 0.97, 30)
        values = [flat_tau(12, d, 1.0) for d in grid]
        low = int(np.argmin(values))
        assert 0 < low < 15
        assert 1.5 < values[low] < 2.0
        tail = values[low:]
        assert all(b > a for a, b in zip(tail, tail[1:]))

    def test_blows_up_near_the_rim(self):
        assert flat_tau(12, 0.95, 1.0) > 1e3

    def test_scale_invariance(self):
        assert flat_tau(9, 0.2, 1.0) == pytest.approx(
            flat_tau(9, 1.0, 5.0), rel=1e-12
        )

    def test_monte_carlo_cross_check(self):
        # sampled saturation of a flat boundary at n=10, d=0.3r
        n, d, r = 10, 0.3, 1.0
        config = BrownianConfig(dim=n, radius=r, num_paths=4000, num_steps=2000, seed=7)
        oracle = HalfSpace(d).contains
        psi = estimate_hitting_probability(oracle, np.zeros(n), config)
        mu = estimate_relative_volume(oracle, np.zeros(n), r, 40000, seed=8)
        sampled = psi.psi ** (n / (n - 2.0)) / mu.psi
        assert sampled == pytest.approx(flat_tau(n, d, r), rel=0.05)

    def test_domain(self):
        with pytest.raises(ValueError):
            flat_tau(2, 0.1, 1.0)
        with pytest.raises(ValueError):
            flat_tau(5, 1.0, 1.0)


class TestIsocapConstant:
    def test_dimension_four_is_e_squared(self):
        assert isocap_constant(4) == pytest.approx(math.e**2, rel=1e-12)

    def test_dimension_ten_against_quadrature(self):
        # independent route: integrate the gamma tail directly
        tail = mpmath.quad(lambda u: u**3 * mpmath.exp(-u), [2.5, mpmath.inf])
        want = float((tail / mpmath.gamma(4)) ** mpmath.mpf("-1.25"))
        assert isocap_constant(10) == pytest.approx(want, rel=1e-6)

    def test_always_above_one(self):
        for n in range(3, 101):
            assert isocap_constant(n) > 1.0

    def test_domain(self):
        with pytest.raises(ValueError):
            isocap_constant(2)


class TestCuboidHitting:
    def test_variants_agree_when_gap_equals_first_side(self):
        for t in (0.04, 0.25, 1.0):
            a = cuboid_hitting_probability(0.7, (0.7, 1.0, 0.5), t, variant="side")
            b = cuboid_hitting_probability(0.7, (0.7, 1.0, 0.5), t, variant="distance")
            assert a == pytest.approx(b, rel=1e-14)

    def test_variants_differ_otherwise(self):
        a = cuboid_hitting_probability(0.2, (0.5, 1.0, 1.0), 0.25, variant="side")
        b = cuboid_hitting_probability(0.2, (0.5, 1.0, 1.0), 0.25, variant="distance")
        assert abs(a - b) > 1e-3

    def test_default_variant_anchors_at_the_side(self):
        assert cuboid_hitting_probability(0.2, (0.5, 1.0), 0.25) == pytest.approx(
            cuboid_hitting_probability(0.2, (0.5, 1.0), 0.25, variant="side")
        )

    def test_thin_transversal_side_kills_probability(self):
        for variant in ("side", "distance"):
            assert cuboid_hitting_probability(
                0.2, (1.0, 1e-9, 1.0), 0.25, variant=variant
            ) < 1e-8

    def test_gap_anchored_variant_vanishes_with_thin_first_side(self):
        assert cuboid_hitting_probability(
            0.2, (1e-12, 1.0), 0.25, variant="distance"
        ) < 1e-10

    def test_one_dimensional_slab_values(self):
        d, a, t = 0.4, 0.9, 0.36
        rt = mpmath.sqrt(t)
        side = float(2 * (mpmath.ncdf(-a / rt) - mpmath.ncdf(-(a + d) / rt)))
        dist = float(2 * (mpmath.ncdf(-d / rt) - mpmath.ncdf(-(d + a) / rt)))
        assert cuboid_hitting_probability(d, (a,), t, "side") == pytest.approx(
            side, abs=1e-10
        )
        assert cuboid_hitting_probability(d, (a,), t, "distance") == pytest.approx(
            dist, abs=1e-10
        )

    def test_deep_box_limit_recovers_one_sided_reflection(self):
        # a very deep box hit in one dimension is just a barrier crossing
        want = halfspace_hitting_probability(0.4, 0.36)
        got = cuboid_hitting_probability(0.4, (1e6,), 0.36, variant="distance")
        assert got == pytest.approx(want, abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            cuboid_hitting_probability(-0.1, (1.0,), 0.25)
        with pytest.raises(ValueError):
            cuboid_hitting_probability(0.1, (), 0.25)
        with pytest.raises(ValueError):
            cuboid_hitting_probability(0.1, (1.0, 0.0), 0.25)
        with pytest.raises(ValueError):
            cuboid_hitting_probability(0.1, (1.0,), 0.25, variant="printed")


class TestCylinderTauScaling:
    def test_identity_scale(self):
        assert cylinder_tau_scaling(8, 1.0) == 1.0

    def test_six_dimensional_halving(self):
        assert cylinder_tau_scaling(6, 0.5) == pytest.approx(math.sqrt(2), rel=1e-12)

    def test_decreasing_in_dimension(self):
        values = [cylinder_tau_scaling(n, 0.5) for n in range(3, 20)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_diverges_for_thin_tubes(self):
        assert cylinder_tau_scaling(4, 1e-8) > 1e7

    def test_domain(self):
        with pytest.raises(ValueError):
            cylinder_tau_scaling(2, 0.5)
        with pytest.raises(ValueError):
            cylinder_tau_scaling(5, 0.0)
        with pytest.raises(ValueError):
            cylinder_tau_scaling(5, 1.5)


class TestCurvatureLowerBound:
    def test_pinned_values(self):
        tau, n, d, r = 5.0, 10, 0.2, 1.0
        phi = mpmath.ncdf(-d / mpmath.sqrt(r * r / n))
        gen = float(tau ** mpmath.mpf("0.1") / r * phi ** (mpmath.mpf(-1) / 8))
        near = float(
            tau ** mpmath.mpf("0.1")
            * (r - d)
            / r ** (mpmath.mpf(10) / 9)
            * phi ** (mpmath.mpf(-10) / 72)
        )
        assert curvature_lower_bound(tau, n, d, r) == pytest.approx(gen, rel=1e-10)
        assert curvature_lower_bound(tau, n, d, r, near_center=True) == pytest.approx(
            near, rel=1e-10
        )

    def test_monotone_in_saturation(self):
        for near in (False, True):
            values = [
                curvature_lower_bound(tau, 8, 0.1, 1.0, near_center=near)
                for tau in (0.5, 1.0, 2.0, 5.0, 20.0)
            ]
            assert all(b > a for a, b in zip(values, values[1:]))

    def test_vanishing_saturation(self):
        assert curvature_lower_bound(1e-200, 10, 0.1, 1.0) < 1e-19

    def test_near_center_variant_is_stronger_at_zero_distance(self):
        # at d = 0 and unit radius the half-ball variant exceeds the
        # general one by exactly 2^(1/((n-1)(n-2)))
        for n in (3, 5, 10, 50):
            for tau in (0.5, 2.0, 100.0):
                gen = curvature_lower_bound(tau, n, 0.0, 1.0)
                near = curvature_lower_bound(tau, n, 0.0, 1.0, near_center=True)
                assert near == pytest.approx(
                    gen * 2.0 ** (1.0 / ((n - 1) * (n - 2))), rel=1e-12
                )
                assert near > gen

    def test_domain(self):
        with pytest.raises(ValueError):
            curvature_lower_bound(0.0, 10, 0.1, 1.0)
        with pytest.raises(ValueError):
            curvature_lower_bound(1.0, 2, 0.1, 1.0)
        with pytest.raises(ValueError):
            curvature_lower_bound(1.0, 10, 1.0, 1.0)


class TestIntegralCurvatureLowerBound:
    def test_pinned_composition(self):
        tau_h, n, d, r = 4.0, 10, 0.3, 1.0
        ball = float(mpmath.pi**5 / mpmath.factorial(5))
        cap = ball * 0.5 * float(
            mpmath.betainc(mpmath.mpf("5.5"), mpmath.mpf("0.5"), 0, 1 - d * d, regularized=True)
        )
        want = cap - 2.0 * ball * float(mpmath.ncdf(-d * mpmath.sqrt(10))) / tau_h
        assert integral_curvature_lower_bound(tau_h, n, d, r) == pytest.approx(
            want, rel=1e-10
        )

    def test_saturation_limit_is_the_cap_volume(self):
        cap = spherical_cap_volume(10, 0.3, 1.0)
        got = integral_curvature_lower_bound(1e15, 10, 0.3, 1.0)
        assert got == pytest.approx(cap, abs=1e-12)

    def test_increasing_in_saturation(self):
        values = [
            integral_curvature_lower_bound(tau_h, 7, 0.2, 1.3)
            for tau_h in (0.5, 1.0, 4.0, 50.0)
        ]
        assert all(b > a for a, b in zip(values, values[1:]))

    @given(
        tau_h=st.floats(1e-3, 1e6),
        d=st.floats(0.0, 1.3),
    )
    @settings(max_examples=60, deadline=None)
    def test_never_exceeds_the_cap_volume(self, tau_h, d):
        cap = spherical_cap_volume(7, d, 1.3)
        assert integral_curvature_lower_bound(tau_h, 7, d, 1.3) <= cap + 1e-15

    def test_domain(self):
        with pytest.raises(ValueError):
            integral_curvature_lower_bound(0.0, 7, 0.2, 1.0)
        with pytest.raises(ValueError):
            integral_curvature_lower_bound(1.0, 7, 1.2, 1.0)


class TestChooseAlpha:
    def residual(self, alpha, epsilon, d, fro, inp, factor):
        delta = alpha * fro * inp
        rt = mpmath.sqrt(factor) * d
        base = mpmath.ncdf(-d / rt)
        return float(2 * (mpmath.ncdf(-(d - delta) / rt) / base - 1) - epsilon)

    def test_bisection_root(self):
        for epsilon in (0.05, 0.1, 0.5):
            alpha = choose_alpha(epsilon, 1.0, 2.0, 3.0, 0.25)
            assert abs(self.residual(alpha, epsilon, 1.0, 2.0, 3.0, 0.25)) < 1e-10

    def test_monotone_in_epsilon(self):
        alphas = [
            choose_alpha(eps, 1.0, 2.0, 3.0, 0.25) for eps in (0.01, 0.1, 1.0, 10.0)
        ]
        assert all(b > a for a, b in zip(alphas, alphas[1:]))

    def test_small_epsilon_gives_small_alpha(self):
        assert choose_alpha(1e-8, 1.0, 2.0, 3.0, 0.25) < 1e-8

    def test_unreachable_epsilon_fails_loudly(self):
        # the deviation cannot exceed 2*(1/(2*Phi(-2)) - 1) at this horizon
        with pytest.raises(ValueError, match="largest attainable"):
            choose_alpha(50.0, 1.0, 2.0, 3.0, 0.25)

    def test_near_the_attainable_edge(self):
        alpha = choose_alpha(41.0, 1.0, 2.0, 3.0, 0.25)
        assert abs(self.residual(alpha, 41.0, 1.0, 2.0, 3.0, 0.25)) < 1e-8

    def test_domain(self):
        with pytest.raises(ValueError):
            choose_alpha(0.0, 1.0, 2.0, 3.0, 0.25)
        with pytest.raises(ValueError):
            choose_alpha(0.1, 0.0, 2.0, 3.0, 0.25)
        with pytest.raises(ValueError):
            choose_alpha(0.1, 1.0, -1.0, 3.0, 0.25)
        with pytest.raises(ValueError):
            choose_alpha(0.1, 1.0, 2.0, 3.0, 0.0)


class TestGaussianIsoperimetricRhs:
    def test_majority_volume_gives_zero(self):
        assert gaussian_isoperimetric_rhs(0.5, 1.0, 3) == 0.0
        assert gaussian_isoperimetric_rhs(0.75, 2.0, 5) == 0.0

    def test_one_sigma_oracle(self):
        mu = float(mpmath.ncdf(-1))
        for n in (4, 9):
            assert gaussian_isoperimetric_rhs(mu, math.sqrt(n), n) == pytest.approx(
                1.0, abs=1e-9
            )

    def test_linear_in_radius(self):
        a = gaussian_isoperimetric_rhs(0.2, 1.0, 6)
        b = gaussian_isoperimetric_rhs(0.2, 3.5, 6)
        assert b == pytest.approx(3.5 * a, rel=1e-12)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                gaussian_isoperimetric_rhs(bad, 1.0, 3)
        with pytest.raises(ValueError):
            gaussian_isoperimetric_rhs(0.2, 0.0, 3)


class TestExactRelativeVolumes:
    def test_halfspace_matches_cap_fraction(self):
        assert shape_relative_volume(HalfSpace(0.3), 6, 1.0) == pytest.approx(
            relative_cap_volume(6, 0.3, 1.0), rel=1e-14
        )
        assert shape_relative_volume(HalfSpace(2.0), 6, 1.0) == 0.0

    def test_wedge_is_an_angle_fraction(self):
        assert shape_relative_volume(Wedge(1.3), 5, 1.0) == pytest.approx(
            1.3 / (2 * math.pi), rel=1e-14
        )

    def test_cone_matches_wedge_in_the_plane(self):
        # in two dimensions the solid cone IS the planar sector, and the
        # beta-function route must reproduce the elementary angle fraction
        for angle in (0.4, 1.0, 2.5):
            assert shape_relative_volume(Cone(angle), 2, 1.0) == pytest.approx(
                angle / (2 * math.pi), rel=1e-12
            )

    def test_cone_against_surface_quadrature(self):
        n, angle = 5, 1.2
        num = mpmath.quad(lambda u: mpmath.sin(u) ** (n - 2), [0, angle / 2])
        den = mpmath.quad(lambda u: mpmath.sin(u) ** (n - 2), [0, mpmath.pi])
        assert shape_relative_volume(Cone(angle), n, 1.0) == pytest.approx(
            float(num / den), rel=1e-10
        )

    def test_cylinder_against_quadrature(self):
        n, shape, r = 5, Cylinder(rho=0.9, h=0.5, dist=0.1), 1.0
        slice_area = mpmath.pi**2 / mpmath.gamma(3)  # 4-ball of unit radius

        def section(x):
            return min(mpmath.mpf("0.9"), mpmath.sqrt(1 - x * x)) ** 4

        x_c = mpmath.sqrt(1 - mpmath.mpf("0.9") ** 2)
        volume = slice_area * mpmath.quad(section, [0.1, x_c, 0.6])
        want = float(volume / (mpmath.pi ** mpmath.mpf("2.5") / mpmath.gamma(mpmath.mpf("3.5"))))
        assert shape_relative_volume(shape, n, r) == pytest.approx(want, rel=1e-10)

    def test_wide_cylinder_is_a_slab(self):
        # a tube wider than the probe ball cuts it along the axis only
        assert shape_relative_volume(Cylinder(2.0, 3.0, 0.0), 6, 1.0) == pytest.approx(
            0.5, rel=1e-12
        )

    def test_degenerate_cylinder(self):
        assert shape_relative_volume(Cylinder(0.0, 1.0, 0.1), 4, 1.0) == 0.0
        assert shape_relative_volume(Cylinder(0.5, 1.0, 2.0), 4, 1.0) == 0.0

    def test_flat_cap_and_ball_limit_agree(self):
        # an outward bend of enormous radius is indistinguishable from flat
        flat = shape_relative_volume(SphericalCapBoundary(0.3, None), 5, 1.0)
        bent = shape_relative_volume(SphericalCapBoundary(0.3, 1e6, +1), 5, 1.0)
        assert bent == pytest.approx(flat, abs=1e-5)
        assert bent < flat

    def test_inward_bend_through_the_center(self):
        # R = d puts the bend center at the origin: the shape is the
        # complement of a centered ball, whose volume fraction is exact
        for n in (3, 8):
            got = shape_relative_volume(SphericalCapBoundary(0.5, 0.5, -1), n, 1.0)
            assert got == pytest.approx(1.0 - 0.5**n, rel=1e-12)

    def test_cuboid_has_no_closed_form(self):
        with pytest.raises(ValueError, match="closed-form"):
            shape_relative_volume(Cuboid(0.1, (1.0, 1.0)), 2, 1.0)

    def test_monte_carlo_agreement(self):
        shapes = [
            HalfSpace(0.3),
            SphericalCapBoundary(0.25, 1.5, +1),
            SphericalCapBoundary(0.25, 1.5, -1),
            Cylinder(rho=0.9, h=0.6, dist=0.1),
            Wedge(1.3),
            Cone(1.2),
        ]
        n, r = 5, 1.0
        for i, shape in enumerate(shapes):
            exact = shape_relative_volume(shape, n, r)
            est = estimate_relative_volume(
                shape.contains, np.zeros(n), r, 20000, seed=100 + i
            )
            assert abs(est.psi - exact) <= 3.0 * est.stderr, type(shape).__name__


class TestBallOverlap:
    def test_disjoint_and_touching(self):
        assert ball_overlap_relative_volume(4, 1.0, 0.5, 1.6) == 0.0
        assert ball_overlap_relative_volume(4, 1.0, 0.5, 1.5) == 0.0

    def test_nested(self):
        assert ball_overlap_relative_volume(4, 1.0, 3.0, 0.5) == 1.0
        assert ball_overlap_relative_volume(4, 1.0, 0.5, 0.25) == pytest.approx(0.5**4)

    def test_three_dimensional_lens_formula(self):
        r1, r2, c = 1.0, 0.8, 1.2
        lens = (
            math.pi
            * (r1 + r2 - c) ** 2
            * (c * c + 2 * c * (r1 + r2) - 3 * (r1 - r2) ** 2)
            / (12 * c)
        )
        want = lens / (4 * math.pi / 3 * r1**3)
        assert ball_overlap_relative_volume(3, r1, r2, c) == pytest.approx(
            want, rel=1e-12
        )

    def test_symmetric_in_the_two_balls(self):
        for c in (0.5, 0.9, 1.4):
            a = ball_overlap_relative_volume(4, 1.0, 0.7, c) * unit_ball_volume(4)
            b = ball_overlap_relative_volume(4, 0.7, 1.0, c) * (
                unit_ball_volume(4) * 0.7**4
            )
            assert a == pytest.approx(b, rel=1e-11)

    @given(
        r2=st.floats(0.1, 5.0),
        d1=st.floats(0.0, 8.0),
        d2=st.floats(0.0, 8.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_fraction_decreases_with_separation(self, r2, d1, d2):
        lo, hi = sorted((d1, d2))
        near = ball_overlap_relative_volume(5, 1.0, r2, lo)
        far = ball_overlap_relative_volume(5, 1.0, r2, hi)
        assert 0.0 <= far <= near <= 1.0 + 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            ball_overlap_relative_volume(4, 0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            ball_overlap_relative_volume(4, 1.0, 1.0, -0.5)


class TestAnalyticAgreesWithSampling:
    @pytest.mark.parametrize("n", [3, 5, 10])
    @pytest.mark.parametrize("zeta", [0.5, 1.2])
    def test_halfspace_psi(self, n, zeta):
        r = 1.0
        t = r * r / n
        d = zeta * math.sqrt(t)
        config = BrownianConfig(
            dim=n, radius=r, num_paths=800, num_steps=4000, seed=11 * n + int(10 * zeta)
        )
        est = estimate_hitting_probability(HalfSpace(d).contains, np.zeros(n), config)
        want = halfspace_hitting_probability(d, t)
        assert abs(est.psi - want) <= 3.0 * est.stderr


class TestIsocapacitoryInequalityAnalytic:
    """Volume never beats the saturating power of the hitting probability.

    Both sides in closed form: the exact covered fraction of the probe
    ball against c_n * psi^(n/(n-2)) with the flat-boundary psi at the
    shape's own separation. Bent boundaries are kept gentle (bend radius
    well above the probe radius) so the flat psi remains representative.
    """

    @pytest.mark.parametrize("n", [3, 5, 10])
    def test_halfspace_family(self, n):
        c_n = isocap_constant(n)
        t = 1.0 / n
        for d in np.linspace(0.0, 0.95, 25):
            mu = shape_relative_volume(HalfSpace(d), n, 1.0)
            psi = halfspace_hitting_probability(d, t)
            assert mu <= c_n * psi ** (n / (n - 2.0)) + 1e-15

    @pytest.mark.parametrize("n", [3, 5, 10])
    def test_outward_bends(self, n):
        c_n = isocap_constant(n)
        t = 1.0 / n
        for big_r in (0.5, 1.0, 3.0, 10.0):
            for d in np.linspace(0.0, 0.9, 12):
                shape = SphericalCapBoundary(d, big_r, +1)
                mu = shape_relative_volume(shape, n, 1.0)
                psi = halfspace_hitting_probability(d, t)
                assert mu <= c_n * psi ** (n / (n - 2.0)) + 1e-15

    @pytest.mark.parametrize("n", [3, 5, 10])
    def test_gentle_inward_bends(self, n):
        c_n = isocap_constant(n)
        t = 1.0 / n
        for big_r in (8.0, 20.0, 100.0):
            for d in np.linspace(0.0, 0.7, 10):
                shape = SphericalCapBoundary(d, big_r, -1)
                mu = shape_relative_volume(shape, n, 1.0)
                psi = halfspace_hitting_probability(d, t)
                assert mu <= c_n * psi ** (n / (n - 2.0)) + 1e-15


class TestCapComplementIdentity:
    def test_large_cap_completes_the_ball(self):
        # the piece on the near side of the plane, integrated directly,
        # must account for everything the cap formula leaves out
        for n in (2, 5, 11):
            for d in (0.0, 0.2, 0.9):
                small = spherical_cap_volume(n, d, 1.0)
                slices = mpmath.pi ** (mpmath.mpf(n - 1) / 2) / mpmath.gamma(
                    mpmath.mpf(n + 1) / 2
                )
                large = float(
                    slices
                    * mpmath.quad(
                        lambda x: (1 - x * x) ** (mpmath.mpf(n - 1) / 2), [-1, d]
                    )
                )
                assert small + large == pytest.approx(
                    unit_ball_volume(n), rel=1e-12
                )
