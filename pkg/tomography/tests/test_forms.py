import json
from pathlib import Path

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from tomography.exceptions import DescriptorParseError
from tomography.forms import descriptor_from_dict, parse_descriptor, serialize
from tomography.star_body import AxialRevolution, Ball, Box, CrossPolytope, Cylinder, Ellipsoid, PerturbedBall

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


class ParseDescriptorTest(SimpleTestCase):
    def test_ball_fixture(self):
        body = parse_descriptor((FIXTURES / 'ball3.json').read_text())
        self.assertEqual(body, Ball(3, 1.0))

    def test_each_variant(self):
        cases = [
            ({'type': 'ellipsoid', 'semi_axes': [1, 2, 3]}, Ellipsoid((1.0, 2.0, 3.0))),
            ({'type': 'box', 'n': 2, 'half_sides': [0.5, 1]}, Box((0.5, 1.0))),
            ({'type': 'cross_polytope', 'n': 4, 'a': 2}, CrossPolytope(4, 2.0)),
            ({'type': 'cylinder', 'n': 3, 'r': 1, 'h': 0.5}, Cylinder(3, 1.0, 0.5)),
            ({'type': 'perturbed_ball', 'r0': 1, 'amplitude': 0.1, 'coefficients': [[2, 0, 1.0]]},
             PerturbedBall(1.0, 0.1, ((2, 0, 1.0),))),
        ]
        for payload, expected in cases:
            with self.subTest(kind=payload['type']):
                self.assertEqual(descriptor_from_dict(payload), expected)

    def test_revolution_height_form(self):
        z = [-1.0, -0.7071067811865476, 0.0, 0.7071067811865476, 1.0]
        payload = {'type': 'revolution', 'axis': [0, 0, 1], 'z': z, 'r': [0, 0.7, 1, 0.7, 0]}
        body = descriptor_from_dict(payload)
        self.assertIsInstance(body, AxialRevolution)
        self.assertEqual(body.interpolation, 'chebyshev')

    def test_revolution_forms_cannot_mix(self):
        payload = {'type': 'revolution', 'axis': [0, 0, 1], 'phi': [0, 0.5, 1, 1.5707963267948966],
                   'rho': [1, 1, 1, 1], 'z': [-1, 0, 1, 2, 3], 'r': [0, 1, 1, 1, 0]}
        with self.assertRaises(DescriptorParseError) as ctx:
            descriptor_from_dict(payload)
        self.assertEqual(ctx.exception.path, 'z')

    def test_string_number_rejected(self):
        with self.assertRaises(DescriptorParseError) as ctx:
            parse_descriptor((FIXTURES / 'ball_string.json').read_text())
        self.assertEqual(ctx.exception.path, 'r')

    def test_boolean_rejected(self):
        with self.assertRaises(DescriptorParseError) as ctx:
            descriptor_from_dict({'type': 'ball', 'n': True, 'r': 1.0})
        self.assertEqual(ctx.exception.path, 'n')

    def test_error_path_points_into_list(self):
        payload = {'type': 'box', 'n': 4, 'half_sides': [1, 1, 1, -1]}
        with self.assertRaises(DescriptorParseError) as ctx:
            descriptor_from_dict(payload)
        self.assertEqual(ctx.exception.path, 'half_sides[3]')
        self.assertEqual(ctx.exception.kind, 'parse-error')
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_box_length_must_match_n(self):
        with self.assertRaises(DescriptorParseError) as ctx:
            parse_descriptor((FIXTURES / 'box_bad.json').read_text())
        self.assertEqual(ctx.exception.path, 'half_sides')

    def test_odd_coefficient_path(self):
        payload = {'type': 'perturbed_ball', 'r0': 1, 'amplitude': 0.1, 'coefficients': [[2, 0, 1], [3, 1, 0.5]]}
        with self.assertRaises(DescriptorParseError) as ctx:
            descriptor_from_dict(payload)
        self.assertEqual(ctx.exception.path, 'coefficients[1][0]')

    def test_unknown_key_and_type(self):
        with self.assertRaises(DescriptorParseError) as ctx:
            descriptor_from_dict({'type': 'ball', 'n': 3, 'r': 1, 'color': 'red'})
        self.assertEqual(ctx.exception.path, 'color')
        with self.assertRaises(DescriptorParseError) as ctx:
            descriptor_from_dict({'type': 'torus'})
        self.assertEqual(ctx.exception.path, 'type')

    def test_missing_field(self):
        with self.assertRaises(DescriptorParseError) as ctx:
            descriptor_from_dict({'type': 'cylinder', 'n': 3, 'r': 1})
        self.assertEqual(ctx.exception.path, 'h')

    def test_invalid_json(self):
        with self.assertRaises(DescriptorParseError):
            parse_descriptor('{"type": "ball", ')

    def test_diagnostic_is_single_line_json(self):
        with self.assertRaises(DescriptorParseError) as ctx:
            descriptor_from_dict({'type': 'ball', 'n': 3, 'r': -2})
        line = ctx.exception.as_json()
        self.assertNotIn('\n', line)
        self.assertEqual(json.loads(line)['path'], 'r')


class SerializeTest(SimpleTestCase):
    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(0.01, 100.0), min_size=2, max_size=8))
    def test_ellipsoid_survives_serialization(self, axes):
        body = Ellipsoid(tuple(axes))
        self.assertEqual(parse_descriptor(serialize(body)), body)

    def test_waist_fixture(self):
        body = parse_descriptor((FIXTURES / 'waist.json').read_text())
        self.assertEqual(parse_descriptor(serialize(body)), body)
        self.assertEqual(body.to_dict()['coefficients'], [[2, 0, 1.0]])
