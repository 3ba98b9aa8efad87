import math
import unittest

import numpy as np
import numpy.testing as npt

from polytrek.errors import InvalidObject
from polytrek.geometry import Configuration, RigidObject, RotationTable, posed_points, transform_object


class RigidObjectTests(unittest.TestCase):
    def test_stick_is_centered_on_the_origin(self):
        # When
        stick = RigidObject.stick(1.2, 0.1)

        # Expect
        self.assertEqual(2, stick.dim)
        self.assertEqual(4, stick.n_vertices)
        npt.assert_allclose(stick.vertices.mean(axis=0), [0.0, 0.0], atol=1e-12)
        self.assertAlmostEqual(math.hypot(0.6, 0.05), stick.max_radius)

    def test_static_pairs_are_edges_and_spokes(self):
        # Given
        stick = RigidObject.stick()

        # When
        pairs = stick.static_pairs

        # Expect
        self.assertEqual((8, 2), pairs.shape)
        self.assertEqual({(0, 1), (0, 2), (0, 3), (0, 4)}, {tuple(p) for p in pairs if p[0] == 0})
        npt.assert_allclose(stick.body_points[0], [0.0, 0.0])

    def test_l_shape_is_centered_in_its_corner(self):
        # When
        l_shape = RigidObject.l_shape(1.2, 0.8, 0.1)

        # Expect
        npt.assert_allclose(l_shape.vertices[0], [-0.05, -0.05])
        self.assertEqual(6, l_shape.n_vertices)

    def test_box3d_surface_edges_include_face_diagonals(self):
        # When
        box = RigidObject.box3d()

        # Expect
        self.assertEqual(3, box.dim)
        self.assertEqual(18, box.surface_edges.shape[0])
        self.assertEqual(12, len(box.pieces()))

    def test_create_should_reject_a_center_outside_the_object(self):
        # Expect
        with self.assertRaises(InvalidObject):
            RigidObject.create([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0, 1], [1, 2], [2, 0]], center=[2.0, 2.0])

    def test_create_should_reject_a_disconnected_edge_graph(self):
        # Expect
        with self.assertRaises(InvalidObject):
            RigidObject.create([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [[0, 1], [2, 3]])

    def test_fingerprint_ignores_where_the_object_was_drawn(self):
        # Given
        stick = RigidObject.stick(1.2, 0.1)
        moved = RigidObject.create(
            [[4.4, 4.95], [5.6, 4.95], [5.6, 5.05], [4.4, 5.05]], [[0, 1], [1, 2], [2, 3], [3, 0]]
        )

        # Expect
        self.assertEqual(stick.fingerprint(), moved.fingerprint())
        self.assertNotEqual(stick.fingerprint(), RigidObject.stick(1.0, 0.1).fingerprint())

    def test_point_object_has_a_single_piece(self):
        # When
        point = RigidObject.point()

        # Expect
        self.assertEqual(1, len(point.pieces()))
        self.assertEqual((2, 2), point.body_points.shape)


class PoseTests(unittest.TestCase):
    def test_transform_object_rotates_then_translates(self):
        # Given
        stick = RigidObject.segment(2.0)
        table = RotationTable.for_dimension(2, 4)

        # When
        posed = transform_object(stick, Configuration(p=[1.0, 1.0], rot_index=1), table)

        # Expect
        npt.assert_allclose(posed, [[1.0, 0.0], [1.0, 2.0]], atol=1e-12)

    def test_transform_object_rejects_unknown_rotations(self):
        # Given
        q = Configuration(p=[0.0, 0.0], rot_index=5)

        # Expect
        with self.assertRaises(ValueError):
            transform_object(RigidObject.stick(), q, RotationTable.for_dimension(2, 4))

    def test_posed_points_batches_poses(self):
        # Given
        stick = RigidObject.stick()
        table = RotationTable.for_dimension(2, 12)
        positions = np.array([[0.0, 0.0], [1.0, 2.0]])

        # When
        points = posed_points(stick, positions, np.array([0, 3]), table)

        # Expect
        self.assertEqual((2, 5, 2), points.shape)
        npt.assert_allclose(points[:, 0], positions)
        npt.assert_allclose(points[1, 1:], transform_object(stick, Configuration(p=[1.0, 2.0], rot_index=3), table))

    def test_translation_distance_is_the_one_norm(self):
        # Given
        first = Configuration(p=[0.0, 0.0], rot_index=0)
        second = Configuration(p=[1.0, -2.0], rot_index=4)

        # Expect
        self.assertAlmostEqual(3.0, first.translation_distance(second))
