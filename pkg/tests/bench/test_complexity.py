import unittest

from polytrek.bench import constraint_growth, count_traversal_problems, two_box_cover


class ComplexityTests(unittest.TestCase):
    def test_two_box_cover_has_one_edge(self):
        # When
        coarse = two_box_cover()

        # Expect
        self.assertEqual([(0, 1)], coarse.edge_list)
        self.assertEqual(2, coarse.n_polytopes)

    def test_problem_count_grows_with_the_discretization(self):
        # Expect
        self.assertEqual(24, count_traversal_problems(4, 12))
        self.assertLess(count_traversal_problems(4, 12), count_traversal_problems(8, 24))

    def test_rows_grow_linearly_with_interpolation_count(self):
        # When
        growth = constraint_growth([2, 4, 8])

        # Expect
        self.assertEqual([2, 4, 8], [n for n, _ in growth])
        rows = [count for _, count in growth]
        self.assertLess(rows[0], rows[1])
        self.assertEqual(2 * (rows[1] - rows[0]), rows[2] - rows[1])
