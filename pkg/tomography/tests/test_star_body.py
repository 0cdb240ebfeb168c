import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from tomography.exceptions import InvalidParameter, UnsupportedBody
from tomography.radon import volume
from tomography.sphere_quad import ball_volume, sph_harm, sphere_rule
from tomography.star_body import (
    AxialRevolution, Ball, Box, CrossPolytope, Cylinder, Ellipsoid, PerturbedBall, PoleFrame, PolarRevolution,
    Sampled, convexity_probe, lobatto_heights,
)

WAIST = PerturbedBall(1.0, 1.2, ((2, 0, 1.0),))


def ellipsoid_profile(a, h, count=33, interpolation='chebyshev'):
    z = lobatto_heights(count, h)
    r = a * np.sqrt(np.maximum(1.0 - (z / h) ** 2, 0.0))
    r[0] = r[-1] = 0.0
    return AxialRevolution((0.0, 0.0, 1.0), tuple(z), tuple(r), interpolation)


class RadialFunctionTest(SimpleTestCase):
    def test_ball(self):
        ball = Ball(3, 2.0)
        self.assertEqual(ball.radial((0.3, 0.1, -0.2)), 2.0)
        self.assertTrue(ball.contains((1.0, 1.0, 1.0)))
        self.assertFalse(ball.contains((2.0, 0.1, 0.0)))
        self.assertTrue(ball.contains((0.0, 0.0, 0.0)))
        self.assertAlmostEqual(ball.closed_form_volume(), 32 * math.pi / 3)

    def test_ellipsoid_axes(self):
        body = Ellipsoid((1.0, 2.0, 3.0))
        np.testing.assert_allclose(body.radial(np.eye(3)), [1.0, 2.0, 3.0])
        self.assertTrue(body.known_convex)
        self.assertEqual(body.smoothness, 'Cinf')

    def test_box_and_cross_polytope(self):
        diagonal = np.ones(3) / math.sqrt(3)
        self.assertAlmostEqual(Box((0.5, 0.5, 0.5)).radial(diagonal), 0.5 * math.sqrt(3))
        self.assertAlmostEqual(Box((0.5, 1.0, 2.0)).radial((0, 0, 1)), 2.0)
        self.assertAlmostEqual(CrossPolytope(3, 1.0).radial(diagonal), 1 / math.sqrt(3))
        self.assertAlmostEqual(CrossPolytope(4, 1.0).closed_form_volume(), 16 / 24)

    def test_cylinder(self):
        body = Cylinder(3, 1.0, 2.0)
        self.assertAlmostEqual(body.radial((1, 0, 0)), 1.0)
        self.assertAlmostEqual(body.radial((0, 0, -1)), 2.0)
        self.assertAlmostEqual(body.closed_form_volume(), 4 * math.pi)

    def test_dimension_mismatch(self):
        with self.assertRaises(InvalidParameter):
            Ball(3, 1.0).radial((1.0, 0.0))

    def test_invalid_parameters(self):
        with self.assertRaises(InvalidParameter):
            Ball(3, -1.0)
        with self.assertRaises(InvalidParameter):
            Ellipsoid((1.0, 0.0, 2.0))
        with self.assertRaises(InvalidParameter):
            Box((1.0,))


class VolumeTest(SimpleTestCase):
    def test_quadrature_matches_closed_forms(self):
        for body in (Ball(3, 1.0), Ellipsoid((1.0, 2.0, 3.0)), Ellipsoid((1.0, 1.0, 4.0))):
            self.assertLess(abs(volume(body) / body.closed_form_volume() - 1), 1e-8)

    def test_unit_ball_volume(self):
        self.assertAlmostEqual(volume(Ball(3, 1.0)), 4 * math.pi / 3, places=12)

    def test_monte_carlo_box_volume(self):
        box = Box((0.5,) * 10)
        self.assertLess(abs(volume(box, samples=500_000, seed=0) - 1.0), 0.01)

    def test_monte_carlo_ball_volume_is_exact(self):
        self.assertAlmostEqual(volume(Ball(10, 1.0), samples=1000), ball_volume(10), places=12)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.1, 10.0))
    def test_volume_scales_with_dimension_power(self, s):
        body = Ellipsoid((1.0, 1.5, 2.0))
        self.assertAlmostEqual(volume(body.scaled(s)) / volume(body), s ** 3, delta=1e-10 * s ** 3)

    def test_scaled_keeps_variant(self):
        self.assertEqual(Box((1.0, 2.0)).scaled(2.0), Box((2.0, 4.0)))
        self.assertEqual(Ball(4, 1.0).scaled(3.0), Ball(4, 3.0))
        with self.assertRaises(InvalidParameter):
            Ball(3, 1.0).scaled(0.0)


class DerivativeTest(SimpleTestCase):
    def _finite_difference(self, body, frame, theta, phi, step=1e-6):
        upper = body.radial(frame.point(theta, phi + step))
        lower = body.radial(frame.point(theta, phi - step))
        return (upper - lower) / (2 * step)

    def test_ellipsoid_closed_form(self):
        body = Ellipsoid((1.0, 2.0, 3.0))
        frame = PoleFrame.at((0.2, -0.4, 0.9))
        for theta, phi in ((0.3, 0.5), (2.0, 1.2), (4.0, 2.8)):
            self.assertAlmostEqual(body.radial_dphi(frame, theta, phi),
                                   self._finite_difference(body, frame, theta, phi), delta=1e-7)

    def test_perturbed_ball_at_both_poles(self):
        body = PerturbedBall(1.0, 0.2, ((2, 1, 0.5), (4, -2, 0.3)))
        for pole in ((0, 0, 1), (0, 0, -1), (0.6, 0.0, 0.8)):
            frame = PoleFrame.at(pole)
            for theta, phi in ((0.1, 0.4), (3.5, 1.9)):
                self.assertAlmostEqual(body.radial_dphi(frame, theta, phi),
                                       self._finite_difference(body, frame, theta, phi), delta=1e-6)

    def test_revolution_profile_aligned_pole(self):
        body = ellipsoid_profile(1.0, 2.0)
        frame = PoleFrame.at((0, 0, 1))
        for phi in (0.3, 1.0, 2.2):
            self.assertAlmostEqual(body.radial_dphi(frame, 0.7, phi),
                                   self._finite_difference(body, frame, 0.7, phi), delta=1e-5)

    def test_non_smooth_body_rejected(self):
        with self.assertRaises(UnsupportedBody):
            Box((1.0, 1.0, 1.0)).radial_dphi(PoleFrame.at((0, 0, 1)), 0.0, 0.5)

    def test_polar_angle_range(self):
        with self.assertRaises(InvalidParameter):
            Ball(3, 1.0).radial_dphi(PoleFrame.at((0, 0, 1)), 0.0, 4.0)


class PerturbedBallTest(SimpleTestCase):
    def test_odd_degree_rejected(self):
        with self.assertRaises(InvalidParameter):
            PerturbedBall(1.0, 0.1, ((3, 0, 1.0),))

    def test_repeated_index_rejected(self):
        with self.assertRaises(InvalidParameter):
            PerturbedBall(1.0, 0.1, ((2, 0, 1.0), (2, 0, 0.5)))

    def test_radius_floor(self):
        with self.assertRaises(InvalidParameter):
            PerturbedBall(1.0, 5.0, ((2, 0, 1.0),))

    def test_waist_profile(self):
        y20_pole = math.sqrt(5 / (4 * math.pi))
        self.assertAlmostEqual(WAIST.radial((0, 0, 1)), 1 + 1.2 * y20_pole)
        self.assertAlmostEqual(WAIST.radial((1, 0, 0)), 1 - 0.6 * y20_pole)


class RevolutionTest(SimpleTestCase):
    def test_lobatto_heights_are_symmetric(self):
        for count in (5, 6, 33, 64):
            heights = lobatto_heights(count, 2.0)
            self.assertEqual(heights[0], -2.0)
            self.assertEqual(heights[-1], 2.0)
            self.assertTrue(np.array_equal(heights, -heights[::-1]))
            self.assertTrue(np.all(np.diff(heights) > 0))

    def test_ellipsoidal_profile(self):
        body = ellipsoid_profile(1.5, 2.0)
        reference = Ellipsoid((1.5, 1.5, 2.0))
        nodes = sphere_rule(3, 16).nodes
        np.testing.assert_allclose(body.radial(nodes), reference.radial(nodes), rtol=1e-10)
        self.assertAlmostEqual(body.closed_form_volume(), reference.closed_form_volume(), places=10)

    def test_pchip_profile_is_c0(self):
        body = ellipsoid_profile(1.0, 1.0, count=21, interpolation='pchip')
        self.assertEqual(body.smoothness, 'C0')
        self.assertAlmostEqual(body.radial((0, 0, 1)), 1.0)

    def test_profile_validation(self):
        with self.assertRaises(InvalidParameter):
            AxialRevolution((0, 0, 1), (-1.0, -0.5, 0.0, 0.5, 1.0), (0.0, 1.0, 1.0, 0.5, 0.0), 'linear')
        with self.assertRaises(InvalidParameter):
            AxialRevolution((0, 0, 1), (-1.0, -0.4, 0.0, 0.5, 1.0), (0.0, 1.0, 1.0, 1.0, 0.0), 'chebyshev')

    def test_polar_profile(self):
        phi = np.linspace(0.0, math.pi / 2, 9)
        body = PolarRevolution((0.0, 0.0, 1.0), tuple(phi), (1.0,) * 9)
        self.assertAlmostEqual(body.radial((0.3, 0.2, -0.5)), 1.0)
        self.assertTrue(body.is_smooth())


class SampledTest(SimpleTestCase):
    def test_constant_grid(self):
        body = Sampled.from_grid(np.full((16, 32), 2.0))
        nodes = np.random.default_rng(0).standard_normal((50, 3))
        np.testing.assert_allclose(body.radial(nodes), 2.0, atol=1e-12)

    def test_interpolates_ellipsoid(self):
        reference = Ellipsoid((1.0, 1.2, 1.4))
        grid = sphere_rule(3, 48)
        body = Sampled.from_grid(reference.radial(grid.nodes).reshape(grid.shape))
        points = np.random.default_rng(1).standard_normal((200, 3))
        np.testing.assert_allclose(body.radial(points), reference.radial(points), rtol=1e-4)

    def test_odd_grid_rejected(self):
        grid = sphere_rule(3, 16)
        values = (1.5 + 0.2 * grid.nodes[:, 2]).reshape(grid.shape)
        with self.assertRaises(InvalidParameter):
            Sampled.from_grid(values)

    def test_shape_rejected(self):
        with self.assertRaises(InvalidParameter):
            Sampled.from_grid(np.ones((8, 8)))


class ConvexityProbeTest(SimpleTestCase):
    def test_convex_bodies_pass(self):
        for body in (Ball(3, 1.0), Ellipsoid((1.0, 2.0, 5.0)), Box((1.0, 1.0, 1.0)), CrossPolytope(4, 1.0)):
            self.assertTrue(convexity_probe(body, trials=4000, seed=1).passed, body)

    def test_waist_fails(self):
        verdict = convexity_probe(WAIST, trials=10_000, seed=0)
        self.assertFalse(verdict.passed)
        self.assertGreater(verdict.worst_excess, 0)
        self.assertIn('witness', verdict.as_dict())

    def test_spiky_sampled_body_fails(self):
        grid = sphere_rule(3, 48)
        phi = np.arccos(np.clip(grid.nodes[:, 2], -1.0, 1.0))
        theta = np.arctan2(grid.nodes[:, 1], grid.nodes[:, 0])
        y40 = sph_harm(4, 0, theta, phi).reshape(grid.shape)
        spiky = Sampled.from_grid(1.0 + 0.9 * np.abs(y40))
        verdict = convexity_probe(spiky, trials=10_000, seed=0)
        self.assertFalse(verdict.passed)
        self.assertGreater(verdict.worst_excess, 0)
