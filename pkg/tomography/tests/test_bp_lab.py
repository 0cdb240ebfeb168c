import math
import os
import unittest

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from tomography.bp_lab import (
    COUNTEREXAMPLE, CONSISTENT, DOMINANCE_FAILS, ball_counterexample, bp_compare, counterexample_radius,
    default_direction_count, e3_positivity_suite, lutwak_batch, lutwak_check, max_section_search,
    random_convex_body, random_star_body, sample_directions, slab_section_estimate,
)
from tomography.exceptions import InvalidParameter, UnsupportedBody
from tomography.sphere_quad import ball_volume
from tomography.star_body import Ball, Box, Ellipsoid, PerturbedBall, convexity_probe

SLOW = os.environ.get('GEOTOM_SLOW_TESTS') == '1'
CUBE10 = Box((0.5,) * 10)


class DirectionSampleTest(SimpleTestCase):
    def test_counts_and_seed(self):
        self.assertEqual(default_direction_count(3), 512)
        self.assertEqual(default_direction_count(10), 2048)
        sample = sample_directions(5, 20, seed=7)
        np.testing.assert_allclose(np.linalg.norm(sample, axis=1), 1.0)
        self.assertTrue(np.array_equal(sample, sample_directions(5, 20, seed=7)))


class BPCompareTest(SimpleTestCase):
    def test_larger_ball_is_consistent(self):
        report = bp_compare(Ball(3, 1.0), Ball(3, 1.1), directions=64)
        self.assertEqual(report.verdict, CONSISTENT)
        self.assertAlmostEqual(report.min_gap, math.pi * (1.21 - 1.0), places=10)

    def test_body_against_itself(self):
        body = Ellipsoid((1.0, 2.0, 3.0))
        report = bp_compare(body, body, directions=64)
        self.assertEqual(report.verdict, CONSISTENT)
        self.assertEqual(report.min_gap, 0.0)
        self.assertEqual(report.max_gap, 0.0)

    def test_smaller_second_body_fails_dominance(self):
        report = bp_compare(Ball(3, 1.0), Ball(3, 0.5), directions=64)
        self.assertEqual(report.verdict, DOMINANCE_FAILS)
        self.assertAlmostEqual(report.min_relative_gap, -0.75, places=10)
        self.assertEqual(len(report.worst_direction), 3)

    def test_scaling_keeps_verdict(self):
        body = Ellipsoid((1.0, 1.5, 2.0))
        self.assertEqual(bp_compare(body, body.scaled(1.05), directions=64).verdict, CONSISTENT)
        self.assertEqual(bp_compare(body.scaled(1.05), body, directions=64).verdict, DOMINANCE_FAILS)

    def test_monte_carlo_dimension(self):
        report = bp_compare(Ball(4, 1.0), Ball(4, 1.2), directions=16, samples=2000)
        self.assertEqual(report.verdict, CONSISTENT)
        self.assertAlmostEqual(report.volumes[0], ball_volume(4), places=12)

    def test_report_keys(self):
        payload = bp_compare(Ball(3, 1.0), Ball(3, 1.1), directions=8, seed=3).as_dict()
        self.assertEqual(payload['seed'], 3)
        self.assertEqual(payload['directions'], 8)
        self.assertEqual(payload['body1'], {'type': 'ball', 'n': 3, 'r': 1.0})
        self.assertIn('volume2', payload)

    def test_dimension_mismatch(self):
        with self.assertRaises(InvalidParameter):
            bp_compare(Ball(3, 1.0), Ball(4, 1.0))

    @settings(max_examples=15, deadline=None)
    @given(st.lists(st.floats(0.5, 3.0), min_size=3, max_size=3), st.lists(st.floats(1.0, 1.5), min_size=3,
                                                                              max_size=3))
    def test_nested_ellipsoids_are_consistent(self, axes, factors):
        inner = Ellipsoid(tuple(axes))
        outer = Ellipsoid(tuple(a * f for a, f in zip(axes, factors)))
        self.assertEqual(bp_compare(inner, outer, directions=32).verdict, CONSISTENT)


class LutwakTest(SimpleTestCase):
    def test_ball_against_ball_is_tight(self):
        report = lutwak_check(Ball(3, 1.0), Ball(3, 1.0), directions=64)
        self.assertAlmostEqual(report['scale'], math.pi, places=6)
        self.assertAlmostEqual(report['margin'], 0.0, delta=1e-6)

    def test_ellipsoid_margin_is_positive(self):
        report = lutwak_check(Ellipsoid((1.0, 1.0, 1.5)), Ball(3, 1.0), directions=128)
        self.assertGreater(report['margin'], 0.0)
        self.assertTrue(report['passed'])

    def test_only_in_three_dimensions(self):
        with self.assertRaises(InvalidParameter):
            lutwak_check(Ball(4, 1.0), Ball(4, 1.0))

    def test_small_batch(self):
        report = lutwak_batch(count=2, seed=1, directions=64)
        self.assertEqual(len(report['rows']), 2)
        self.assertTrue(report['passed'])
        self.assertEqual(report['min_margin'], min(row['margin'] for row in report['rows']))

    @unittest.skipUnless(SLOW, 'GEOTOM_SLOW_TESTS=1')
    def test_full_batch(self):
        report = lutwak_batch(count=50, seed=0)
        self.assertTrue(report['passed'], report['min_margin'])


class GeneratorTest(SimpleTestCase):
    def test_random_convex_bodies_pass_probe(self):
        rng = np.random.default_rng(5)
        for _ in range(4):
            body, rejections = random_convex_body(rng)
            self.assertGreaterEqual(rejections, 0)
            self.assertTrue(body.is_smooth())
            if isinstance(body, PerturbedBall):
                self.assertLessEqual(body.amplitude, 0.15 * body.r0 + 1e-12)
            self.assertTrue(convexity_probe(body, trials=2000, seed=9).passed)

    def test_random_star_body_is_seeded(self):
        first = random_star_body(np.random.default_rng(11))
        second = random_star_body(np.random.default_rng(11))
        self.assertEqual(first, second)


class PositivitySuiteTest(SimpleTestCase):
    def test_ball_margin(self):
        report = e3_positivity_suite(1, bodies=[Ball(3, 1.0)])
        self.assertAlmostEqual(report.min_margin, 1 / (2 * math.pi), places=8)
        self.assertTrue(report.passed)
        self.assertEqual(report.worst_body, {'type': 'ball', 'n': 3, 'r': 1.0})

    def test_small_suite(self):
        report = e3_positivity_suite(3, seed=0)
        self.assertEqual([row['body_id'] for row in report.rows], [0, 1, 2])
        self.assertTrue(report.passed, report.min_margin)
        lines = report.to_csv().splitlines()
        self.assertEqual(lines[0], 'body_id,margin,volume,verdict')
        self.assertEqual(len(lines), 4)
        self.assertEqual(report.as_dict()['count'], 3)

    def test_count_floor(self):
        with self.assertRaises(InvalidParameter):
            e3_positivity_suite(0)

    @unittest.skipUnless(SLOW, 'GEOTOM_SLOW_TESTS=1')
    def test_hundred_bodies(self):
        report = e3_positivity_suite(100, seed=42)
        self.assertGreaterEqual(report.min_margin, -1e-6)


class CounterexampleTest(SimpleTestCase):
    def test_radius_and_volume(self):
        r = counterexample_radius(10)
        self.assertAlmostEqual(r, 0.910192, delta=1e-5)
        self.assertAlmostEqual(ball_volume(9) * r ** 9, math.sqrt(2), places=12)
        self.assertAlmostEqual(ball_volume(10) * r ** 10, 0.995173, delta=1e-5)

    def test_higher_dimensions_widen_the_gap(self):
        volumes = [ball_volume(n) * counterexample_radius(n) ** n for n in (10, 11, 12)]
        self.assertTrue(all(v < 1.0 for v in volumes))
        self.assertLess(volumes[2], volumes[0])

    def test_below_ten_is_unsupported(self):
        with self.assertRaises(UnsupportedBody):
            ball_counterexample(9)

    def test_cube_against_ball(self):
        report = ball_counterexample(10, directions=64, samples=50_000, slab_samples=200_000)
        self.assertEqual(report['verdict'], COUNTEREXAMPLE)
        self.assertEqual(report['cube_volume'], 1.0)
        self.assertLess(report['ball_volume'], 1.0)
        self.assertAlmostEqual(report['ball_section'], math.sqrt(2), places=10)
        self.assertLessEqual(report['report']['max_gap'], math.sqrt(2))
        for name, check in report['checks'].items():
            with self.subTest(direction=name):
                self.assertLess(abs(check['section'] / check['expected'] - 1), 0.05)
                self.assertLess(abs(check['slab'] / check['expected'] - 1), 0.05)

    @unittest.skipUnless(SLOW, 'GEOTOM_SLOW_TESTS=1')
    def test_cube_against_ball_at_full_scale(self):
        report = ball_counterexample(10)
        self.assertEqual(report['report']['directions'], 2048)
        self.assertEqual(report['verdict'], COUNTEREXAMPLE)
        self.assertLessEqual(math.sqrt(2) - report['report']['min_gap'], math.sqrt(2) * 1.02)
        self.assertAlmostEqual(report['ball_volume'], ball_volume(10) * counterexample_radius(10) ** 10, delta=1e-5)
        for name, check in report['checks'].items():
            with self.subTest(direction=name):
                self.assertLess(abs(check['section'] / check['expected'] - 1), 0.02)
                self.assertLess(abs(check['slab'] / check['expected'] - 1), 0.02)


class SlabEstimateTest(SimpleTestCase):
    def test_coordinate_slab(self):
        estimate = slab_section_estimate(CUBE10, np.eye(10)[0], samples=200_000)
        self.assertLess(abs(estimate['value'] - 1.0), 0.05)
        self.assertGreater(estimate['error'], 0.0)

    def test_only_boxes(self):
        with self.assertRaises(UnsupportedBody):
            slab_section_estimate(Ball(10, 1.0), np.eye(10)[0])

    def test_direction_dimension(self):
        with self.assertRaises(InvalidParameter):
            slab_section_estimate(CUBE10, (1.0, 0.0, 0.0))


class MaxSectionSearchTest(SimpleTestCase):
    def test_ball(self):
        result = max_section_search(Ball(3, 1.0), restarts=1)
        self.assertAlmostEqual(result['value'], math.pi, places=10)

    def test_ellipsoid_finds_largest_section(self):
        result = max_section_search(Ellipsoid((1.0, 2.0, 3.0)), restarts=3, seed=2)
        self.assertLess(abs(result['value'] / (6 * math.pi) - 1), 0.01)
        self.assertGreater(abs(result['direction'][0]), 0.99)

    def test_needs_a_start(self):
        with self.assertRaises(InvalidParameter):
            max_section_search(Ball(3, 1.0), restarts=0)

    @unittest.skipUnless(SLOW, 'GEOTOM_SLOW_TESTS=1')
    def test_cube_diagonal_section(self):
        diagonal = np.zeros(10)
        diagonal[:2] = 1.0
        result = max_section_search(CUBE10, restarts=0, starts=[diagonal], samples=200_000, max_evaluations=40)
        self.assertLess(abs(result['value'] / math.sqrt(2) - 1), 0.03)
