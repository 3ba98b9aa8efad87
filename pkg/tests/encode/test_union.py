import unittest

import numpy as np
import numpy.testing as npt

from polytrek.encode import check_quad_in_union, check_segment_in_union, check_triangle_in_union, segments_in_union
from polytrek.errors import NonConvexQuad
from polytrek.geometry import ConvexPolytope

LEFT = ConvexPolytope.from_box([0.0, 0.0], [2.5, 2.0])
RIGHT = ConvexPolytope.from_box([1.5, 0.0], [4.0, 2.0])


class SegmentsInUnionTests(unittest.TestCase):
    def test_batch_over_overlapping_boxes(self):
        # Given
        starts = np.array([[0.5, 1.0], [0.5, 1.0], [0.5, 1.0], [3.0, 0.0]])
        ends = np.array([[3.5, 1.0], [1.0, 1.0], [4.5, 1.0], [3.0, 2.0]])

        # When
        passed = segments_in_union(LEFT, RIGHT, starts, ends)

        # Expect
        npt.assert_array_equal([True, True, False, True], passed)

    def test_crossing_between_disjoint_boxes_fails(self):
        # Given
        right = ConvexPolytope.from_box([2.6, 0.0], [4.0, 2.0])

        # Expect
        self.assertFalse(check_segment_in_union(LEFT, right, [0.5, 1.0], [3.5, 1.0]))

    def test_crossing_between_touching_boxes_passes(self):
        # Given
        right = ConvexPolytope.from_box([2.5, 0.0], [4.0, 2.0])

        # Expect
        self.assertTrue(check_segment_in_union(LEFT, right, [0.5, 1.0], [3.5, 1.0]))


class FaceInUnionTests(unittest.TestCase):
    def test_triangle_spanning_both_boxes(self):
        # Expect
        self.assertTrue(check_triangle_in_union(LEFT, RIGHT, [[0.5, 0.5], [3.5, 0.5], [2.0, 1.5]]))
        self.assertFalse(check_triangle_in_union(LEFT, RIGHT, [[0.5, 0.5], [3.5, 0.5], [2.0, 2.5]]))

    def test_quad_spanning_both_boxes(self):
        # Given
        quad = [[0.5, 0.5], [3.5, 0.5], [3.5, 1.5], [0.5, 1.5]]

        # Expect
        self.assertTrue(check_quad_in_union(LEFT, RIGHT, quad))

    def test_quad_in_3d(self):
        # Given
        first = ConvexPolytope.from_box([0.0, 0.0, 0.0], [2.5, 2.0, 1.0])
        second = ConvexPolytope.from_box([1.5, 0.0, 0.0], [4.0, 2.0, 1.0])
        quad = [[0.5, 0.5, 0.5], [3.5, 0.5, 0.5], [3.5, 1.5, 0.5], [0.5, 1.5, 0.5]]

        # Expect
        self.assertTrue(check_quad_in_union(first, second, quad))

    def test_bow_tie_is_rejected(self):
        # Expect
        with self.assertRaises(NonConvexQuad):
            check_quad_in_union(LEFT, RIGHT, [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])

    def test_non_planar_quad_is_rejected(self):
        # Given
        quad = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.5], [0.0, 1.0, 0.0]]
        box = ConvexPolytope.from_box([0.0] * 3, [1.0] * 3)

        # Expect
        with self.assertRaises(NonConvexQuad):
            check_quad_in_union(box, box, quad)
