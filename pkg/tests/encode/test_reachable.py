import math
import unittest

import numpy as np
import numpy.testing as npt

from polytrek.encode import (
    AffinePoint,
    LinearExpr,
    PoseExpr,
    SegmentKind,
    apex_matrix,
    chord_scale,
    reachable_boundary_2d,
    reachable_boundary_3d,
)
from polytrek.errors import MixedMotion, RotationStepTooLarge
from polytrek.geometry import Configuration, RigidObject, RotationTable

TABLE = RotationTable.for_dimension(2, 12)


def pose(x: float, y: float, rot_index: int = 0) -> Configuration:
    return Configuration(p=[x, y], rot_index=rot_index)


class ReachableBoundaryTests(unittest.TestCase):
    def test_translation_adds_one_sweep_per_vertex(self):
        # When
        segments = reachable_boundary_2d(RigidObject.stick(), pose(0.0, 0.0), pose(1.0, 0.0), TABLE)

        # Expect
        self.assertEqual(20, len(segments))
        self.assertEqual(4, segments.count(SegmentKind.SWEEP))
        self.assertEqual(8, segments.count(SegmentKind.EDGE))
        self.assertEqual(8, segments.count(SegmentKind.SPOKE))

    def test_rotation_adds_two_chords_per_vertex(self):
        # When
        segments = reachable_boundary_2d(RigidObject.stick(), pose(1.0, 1.0, 0), pose(1.0, 1.0, 1), TABLE)

        # Expect
        self.assertEqual(8, segments.count(SegmentKind.SWEEP))

    def test_identical_waypoints_give_the_static_pose(self):
        # When
        segments = reachable_boundary_2d(RigidObject.stick(), pose(1.0, 1.0, 2), pose(1.0, 1.0, 2), TABLE)

        # Expect
        self.assertEqual(8, len(segments))
        self.assertEqual(0, segments.count(SegmentKind.SWEEP))

    def test_mixed_motion_is_rejected(self):
        # Expect
        with self.assertRaises(MixedMotion):
            reachable_boundary_2d(RigidObject.stick(), pose(0.0, 0.0, 0), pose(1.0, 0.0, 1), TABLE)

    def test_large_rotation_step_is_rejected(self):
        # Expect
        with self.assertRaises(RotationStepTooLarge):
            reachable_boundary_2d(RigidObject.stick(), pose(0.0, 0.0, 0), pose(0.0, 0.0, 3), TABLE)

    def test_3d_translation_sweeps_every_edge(self):
        # Given
        box = RigidObject.box3d()

        # When
        surface = reachable_boundary_3d(box, np.zeros(3), np.array([1.0, 0.0, 0.0]), np.eye(3))

        # Expect
        self.assertEqual((24, 3, 3), surface.triangles.shape)
        self.assertEqual((18, 4, 3), surface.parallelograms.shape)
        npt.assert_allclose(surface.parallelograms[:, 3] - surface.parallelograms[:, 0], [[1.0, 0.0, 0.0]] * 18)


class ApexTests(unittest.TestCase):
    def test_chord_scale(self):
        # Expect
        self.assertEqual(1.0, chord_scale(0.0))
        self.assertAlmostEqual(2.0 / math.sqrt(3.0), chord_scale(math.pi / 3.0))

    def test_apex_lies_on_both_end_tangents(self):
        # Given
        vertex = np.array([0.6, 0.05])
        start, end = TABLE[2] @ vertex, TABLE[3] @ vertex

        # When
        apex = apex_matrix(TABLE, 2, 3) @ vertex

        # Expect
        self.assertAlmostEqual(0.0, float((apex - start) @ start))
        self.assertAlmostEqual(0.0, float((apex - end) @ end))

    def test_identity_step_maps_to_the_rotation(self):
        # Expect
        npt.assert_allclose(apex_matrix(TABLE, 4, 4), TABLE[4])


class ExpressionTests(unittest.TestCase):
    def test_linear_expressions_combine_terms(self):
        # Given
        gap = LinearExpr.variable(0) - LinearExpr.variable(1) * 2.0 + 1.0

        # Expect
        self.assertEqual({0: 1.0, 1: -2.0}, gap.terms)
        self.assertAlmostEqual(0.0, gap.evaluate(np.array([3.0, 2.0])))
        self.assertAlmostEqual(2.0, LinearExpr.sum([gap, LinearExpr(constant=1.0)]).evaluate(np.array([0.0, 0.0])))

    def test_symbolic_pose_matches_the_configuration_it_selects(self):
        # Given
        stick = RigidObject.stick()
        symbolic = PoseExpr.symbolic(stick, [0, 1], {k: 2 + k for k in range(TABLE.n_r)}, TABLE)
        values = np.zeros(2 + TABLE.n_r)
        values[:2] = [1.5, -0.5]
        values[2 + 5] = 1.0

        # When
        evaluated = np.array([vertex.evaluate(values) for vertex in symbolic.vertices])

        # Expect
        expected = PoseExpr.from_configuration(stick, pose(1.5, -0.5, 5), TABLE)
        npt.assert_allclose(evaluated, [vertex.constant for vertex in expected.vertices], atol=1e-12)
        npt.assert_allclose(symbolic.body_point(0).evaluate(values), [1.5, -0.5])

    def test_affine_points_compare_by_value(self):
        # Given
        point = AffinePoint([1.0, 2.0], {3: np.array([1.0, 0.0])})

        # Expect
        self.assertTrue(point.same_as(point + np.zeros(2)))
        self.assertFalse(point.same_as(AffinePoint([1.0, 2.0])))
