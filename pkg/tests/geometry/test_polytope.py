import math
import unittest

import numpy as np
import numpy.testing as npt
from pydantic import ValidationError

from polytrek.errors import DimensionMismatch, UnboundedPolytope
from polytrek.geometry import (
    ConvexPolytope,
    contains_point,
    contains_points,
    intersect,
    segment_hits_polytope,
    segments_hit_polytope,
)

UNIT_SQUARE = ConvexPolytope.from_box([0.0, 0.0], [1.0, 1.0])


class ConvexPolytopeTests(unittest.TestCase):
    def test_rows_should_be_normalized_on_construction(self):
        # Given
        A = [[2.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -3.0]]
        b = [2.0, 1.0, 0.0, 0.0]

        # When
        polytope = ConvexPolytope(A=A, b=b)

        # Expect
        npt.assert_allclose(np.linalg.norm(polytope.A, axis=1), 1.0)
        npt.assert_allclose(polytope.b, [1.0, 1.0, 0.0, 0.0])

    def test_unit_rows_should_be_kept_bit_identical(self):
        # Given
        A = np.array([[math.sqrt(0.5), math.sqrt(0.5)], [-1.0, 0.0], [0.0, -1.0]])
        A[0] /= np.linalg.norm(A[0])

        # When
        polytope = ConvexPolytope(A=A, b=[1.0, 0.0, 0.0])

        # Expect
        self.assertEqual(A.tobytes(), polytope.A.tobytes())

    def test_should_reject_zero_rows_and_mismatched_shapes(self):
        # Expect
        with self.assertRaises(ValidationError):
            ConvexPolytope(A=[[0.0, 0.0], [1.0, 0.0]], b=[1.0, 1.0])
        with self.assertRaises(ValidationError):
            ConvexPolytope(A=[[1.0, 0.0], [0.0, 1.0]], b=[1.0])

    def test_box_vertices_should_be_sorted(self):
        # When
        vertices = UNIT_SQUARE.vertices

        # Expect
        npt.assert_allclose(vertices, [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])

    def test_from_vertices_should_round_trip_a_3d_box(self):
        # Given
        corners = [[x, y, z] for x in (0.0, 2.0) for y in (0.0, 1.0) for z in (0.0, 1.0)]

        # When
        polytope = ConvexPolytope.from_vertices(corners)

        # Expect
        self.assertEqual(6, polytope.n_rows)
        npt.assert_allclose(polytope.vertices, sorted(corners))

    def test_chebyshev_center_of_square(self):
        # When
        center, radius = UNIT_SQUARE.chebyshev

        # Expect
        npt.assert_allclose(center, [0.5, 0.5], atol=1e-9)
        self.assertAlmostEqual(0.5, radius)

    def test_chebyshev_should_raise_for_a_polytope_without_rows(self):
        # Given
        whole_plane = ConvexPolytope(A=np.zeros((0, 2)), b=np.zeros(0))

        # Expect
        with self.assertRaises(UnboundedPolytope):
            whole_plane.chebyshev

    def test_shrink_moves_faces_inward(self):
        # When
        shrunk = UNIT_SQUARE.shrink(0.1)

        # Expect
        npt.assert_allclose(shrunk.vertices, [[0.1, 0.1], [0.1, 0.9], [0.9, 0.1], [0.9, 0.9]])

    def test_translate_and_scale(self):
        # When
        moved = UNIT_SQUARE.translate([2.0, 1.0]).scale(2.0)

        # Expect
        lo, hi = moved.bounding_box()
        npt.assert_allclose(lo, [4.0, 2.0])
        npt.assert_allclose(hi, [6.0, 4.0])

    def test_reduce_drops_implied_rows(self):
        # Given
        redundant = ConvexPolytope(A=np.vstack([UNIT_SQUARE.A, [[1.0, 0.0]]]), b=np.append(UNIT_SQUARE.b, 5.0))

        # When
        reduced = redundant.reduce()

        # Expect
        self.assertEqual(4, reduced.n_rows)
        npt.assert_allclose(reduced.vertices, UNIT_SQUARE.vertices)

    def test_contains_polytope(self):
        # Expect
        self.assertTrue(UNIT_SQUARE.contains_polytope(UNIT_SQUARE.shrink(0.2)))
        self.assertFalse(UNIT_SQUARE.shrink(0.2).contains_polytope(UNIT_SQUARE))


class IntersectionTests(unittest.TestCase):
    def test_disjoint_boxes_are_tagged_empty(self):
        # When
        result = intersect(UNIT_SQUARE, ConvexPolytope.from_box([2.0, 0.0], [3.0, 1.0]))

        # Expect
        self.assertTrue(result.empty)
        self.assertTrue(result.is_empty())
        self.assertEqual(-1, result.affine_dimension())

    def test_touching_boxes_keep_their_shared_edge(self):
        # When
        result = intersect(UNIT_SQUARE, ConvexPolytope.from_box([1.0, 0.0], [2.0, 1.0]))

        # Expect
        self.assertFalse(result.empty)
        self.assertEqual(1, result.affine_dimension())
        npt.assert_allclose(result.vertices, [[1.0, 0.0], [1.0, 1.0]])

    def test_overlapping_boxes_intersect_to_a_box(self):
        # When
        result = intersect(UNIT_SQUARE, ConvexPolytope.from_box([0.5, 0.5], [2.0, 2.0]))

        # Expect
        self.assertEqual(2, result.affine_dimension())
        npt.assert_allclose(result.vertices, [[0.5, 0.5], [0.5, 1.0], [1.0, 0.5], [1.0, 1.0]])

    def test_should_raise_on_dimension_mismatch(self):
        # Expect
        with self.assertRaises(DimensionMismatch):
            intersect(UNIT_SQUARE, ConvexPolytope.from_box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]))


class ContainmentTests(unittest.TestCase):
    def test_boundary_points_are_inside(self):
        # Expect
        self.assertTrue(contains_point(UNIT_SQUARE, [1.0, 0.5]))
        self.assertFalse(contains_point(UNIT_SQUARE, [1.0 + 1e-3, 0.5]))

    def test_contains_points_is_vectorised(self):
        # Given
        points = np.array([[0.5, 0.5], [2.0, 0.5], [0.0, 0.0]])

        # When
        mask = contains_points(UNIT_SQUARE, points)

        # Expect
        npt.assert_array_equal([True, False, True], mask)

    def test_segment_through_the_square_hits_it(self):
        # Expect
        self.assertTrue(segment_hits_polytope(UNIT_SQUARE, [-1.0, 0.5], [2.0, 0.5]))

    def test_segment_grazing_the_boundary_does_not_hit(self):
        # Given
        starts = [[-1.0, 1.0], [-1.0, 2.0]]
        ends = [[2.0, 1.0], [2.0, 2.0]]

        # When
        hits = segments_hit_polytope(UNIT_SQUARE, starts, ends)

        # Expect
        npt.assert_array_equal([False, False], hits)

    def test_segment_ending_inside_hits(self):
        # Expect
        self.assertTrue(segment_hits_polytope(UNIT_SQUARE, [-1.0, 0.5], [0.5, 0.5]))
        self.assertFalse(segment_hits_polytope(UNIT_SQUARE, [-1.0, 0.5], [-0.5, 0.5]))
