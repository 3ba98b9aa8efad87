import math
import unittest

import numpy as np
import numpy.testing as npt

from polytrek.bench import PrmParams, check_count, edge_free, poses_free, prm_build, prm_query
from polytrek.errors import InvalidQuery, NoPath
from polytrek.geometry import Configuration, ConvexPolytope, RigidObject, RotationTable, Scene

STICK = RigidObject.stick(0.4, 0.1)
TABLE = RotationTable.for_dimension(2, 4)
OPEN = Scene(lo=[0.0, 0.0], hi=[4.0, 2.0])
POST = Scene(lo=[0.0, 0.0], hi=[4.0, 2.0], obstacles=(ConvexPolytope.from_box([1.9, 0.5], [2.1, 1.5]),))
WALL = Scene(lo=[0.0, 0.0], hi=[4.0, 2.0], obstacles=(ConvexPolytope.from_box([1.9, 0.0], [2.1, 2.0]),))


def q(x, y, rot_index=0):
    return Configuration(p=[x, y], rot_index=rot_index)


class CollisionCheckTests(unittest.TestCase):
    def test_check_count_is_a_power_of_two(self):
        # Expect
        self.assertEqual(1, check_count(q(0.0, 0.0), q(0.05, 0.0), STICK, TABLE, 0.1))
        self.assertEqual(4, check_count(q(0.0, 0.0), q(1.0, 0.0), STICK, TABLE, 0.3))
        turn = math.pi / 2.0 * STICK.max_radius
        expected = 2 ** math.ceil(math.log2(turn / 0.01))
        self.assertEqual(expected, check_count(q(0.0, 0.0), q(0.0, 0.0, 1), STICK, TABLE, 0.01))

    def test_poses_free_checks_edges_and_bounds(self):
        # Given
        positions = np.array([[1.0, 1.0], [2.0, 1.0], [0.1, 1.0]])

        # When
        free = poses_free(STICK, positions, TABLE.matrices[[0, 0, 0]], POST)

        # Expect
        npt.assert_array_equal([True, False, False], free)

    def test_edge_through_an_obstacle_is_rejected(self):
        # Expect
        self.assertFalse(edge_free(q(1.0, 1.0), q(3.0, 1.0), POST, STICK, TABLE, 0.05))
        self.assertTrue(edge_free(q(1.0, 0.2), q(3.0, 0.2), POST, STICK, TABLE, 0.05))


class PrmBuildTests(unittest.TestCase):
    def test_same_seed_gives_the_same_roadmap(self):
        # Given
        params = PrmParams(n_samples=40, seed=3)

        # When
        first = prm_build(POST, STICK, params, TABLE)
        second = prm_build(POST, STICK, params, TABLE)

        # Expect
        self.assertEqual(first, second)
        self.assertEqual(40, first.n_samples)
        self.assertTrue(poses_free(STICK, first.positions, TABLE.matrices[first.rotations], POST).all())

    def test_finer_resolution_keeps_a_subset_of_the_edges(self):
        # When
        coarse = prm_build(POST, STICK, PrmParams(n_samples=40, seed=5, resolution=0.5), TABLE)
        fine = prm_build(POST, STICK, PrmParams(n_samples=40, seed=5, resolution=0.05), TABLE)

        # Expect
        npt.assert_array_equal(coarse.positions, fine.positions)
        self.assertLessEqual({tuple(e) for e in fine.edges.tolist()}, {tuple(e) for e in coarse.edges.tolist()})

    def test_edge_costs_add_turns_at_the_object_radius(self):
        # Given
        roadmap = prm_build(OPEN, STICK, PrmParams(n_samples=20, seed=1), TABLE)
        a, b = roadmap.edges[0]
        first, second = roadmap.config(int(a)), roadmap.config(int(b))

        # Expect
        turn = abs(TABLE.step_angle(first.rot_index, second.rot_index)) * STICK.max_radius
        self.assertAlmostEqual(first.translation_distance(second) + turn, roadmap.costs[0])


class PrmQueryTests(unittest.TestCase):
    def test_open_scene_connects_directly(self):
        # Given
        roadmap = prm_build(OPEN, STICK, PrmParams(n_samples=20, seed=1), TABLE)

        # When
        motion = prm_query(roadmap, OPEN, STICK, q(0.5, 1.0), q(3.5, 1.0), TABLE)

        # Expect
        self.assertEqual(1, len(motion.segments))
        self.assertEqual((q(0.5, 1.0), q(3.5, 1.0)), motion.segments[0].waypoints)
        self.assertAlmostEqual(3.0, motion.cost)

    def test_route_goes_around_the_post(self):
        # Given
        roadmap = prm_build(POST, STICK, PrmParams(n_samples=150, seed=2), TABLE)

        # When
        motion = prm_query(roadmap, POST, STICK, q(1.0, 1.0), q(3.0, 1.0), TABLE)

        # Expect
        self.assertGreater(len(motion.segments[0].waypoints), 2)
        self.assertEqual(q(3.0, 1.0), motion.segments[0].end)

    def test_colliding_query_is_invalid(self):
        # Given
        roadmap = prm_build(POST, STICK, PrmParams(n_samples=10), TABLE)

        # Expect
        with self.assertRaises(InvalidQuery):
            prm_query(roadmap, POST, STICK, q(2.0, 1.0), q(3.0, 1.0), TABLE)

    def test_wall_leaves_no_path(self):
        # Given
        roadmap = prm_build(WALL, STICK, PrmParams(n_samples=30), TABLE)

        # Expect
        with self.assertRaises(NoPath):
            prm_query(roadmap, WALL, STICK, q(1.0, 1.0), q(3.0, 1.0), TABLE)
