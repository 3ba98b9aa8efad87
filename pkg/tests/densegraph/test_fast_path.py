import math
import unittest
from pathlib import Path

import numpy as np
import numpy.testing as npt

import polytrek.densegraph
from polytrek.densegraph import (
    BuildParams,
    PatchId,
    TraversalProblem,
    build_traversal_model,
    fast_verify_n0,
    single_step_pairs,
)
from polytrek.geometry import Configuration, ConvexPolytope, RigidObject, RotationTable, Scene
from polytrek.milp import SolveMode, solve_milp

LEFT = ConvexPolytope.from_box([0.0, 0.0], [2.5, 2.0])
RIGHT = ConvexPolytope.from_box([1.5, 0.0], [4.0, 2.0])
STICK = RigidObject.stick(0.4, 0.1)
TABLE = RotationTable.for_dimension(2, 4)


def q(x, y, rot_index=0):
    return Configuration(p=[x, y], rot_index=rot_index)


class SingleStepPairsTests(unittest.TestCase):
    def test_pairs_are_sorted_by_translation_cost(self):
        # Given
        sources = [q(0.0, 0.0), q(1.0, 0.0)]
        targets = [q(3.0, 0.0), q(1.5, 0.5)]

        # When
        a, b, costs = single_step_pairs(sources, targets, TABLE)

        # Expect
        npt.assert_array_equal([1, 0, 1, 0], a)
        npt.assert_array_equal([1, 1, 0, 0], b)
        npt.assert_allclose([1.0, 2.0, 2.0, 3.0], costs)

    def test_rotation_pairs_need_the_same_position_and_a_small_turn(self):
        # Given
        sources = [q(1.0, 1.0, 0)]
        targets = [q(1.0, 1.0, 1), q(1.0, 1.0, 2), q(2.0, 1.0, 1)]

        # Expect
        self.assertEqual(0, single_step_pairs(sources, targets, TABLE)[0].shape[0])
        npt.assert_array_equal([0], single_step_pairs(sources, targets, TABLE, math.pi / 2.0)[1])


class FastVerifyTests(unittest.TestCase):
    def test_cheapest_passing_pair_is_returned(self):
        # Given
        sources = [q(3.5, 1.0), q(3.5, 1.5)]
        targets = [q(1.0, 1.0), q(1.0, 1.4)]

        # When
        found = fast_verify_n0(sources, targets, [LEFT, RIGHT], STICK, TABLE)

        # Expect
        self.assertEqual((q(3.5, 1.0), q(1.0, 1.0)), found[:2])
        self.assertAlmostEqual(2.5, found[2])

    def test_sweep_leaving_the_regions_fails(self):
        # Expect
        self.assertIsNone(fast_verify_n0([q(1.0, 1.0)], [q(3.0, 1.0)], [LEFT], STICK, TABLE))

    def test_rotation_in_place_passes_within_one_region(self):
        # When
        found = fast_verify_n0([q(1.0, 1.0, 0)], [q(1.0, 1.0, 1)], [LEFT], STICK, TABLE, dtheta_max=math.pi / 2.0)

        # Expect
        self.assertIsNotNone(found)
        self.assertEqual(0.0, found[2])

    def test_rotation_beyond_the_step_limit_has_no_pair(self):
        # Expect
        self.assertIsNone(fast_verify_n0([q(1.0, 1.0, 0)], [q(1.0, 1.0, 1)], [LEFT], STICK, TABLE))



def random_side(rng, count, x_range):
    return [q(rng.uniform(*x_range), rng.uniform(0.3, 1.7), int(rng.integers(0, 8))) for _ in range(count)]


class MilpAgreementTests(unittest.TestCase):
    def test_verdict_matches_the_single_step_milp_on_random_pairs(self):
        # Given
        rng = np.random.default_rng(41)
        table = RotationTable.for_dimension(2, 8)
        scene = Scene(lo=[0.0, 0.0], hi=[4.0, 2.0])
        params = BuildParams(n_t=12, n_r=8)
        certified = 0

        for trial in range(200):
            sources = random_side(rng, int(rng.integers(1, 3)), (0.3, 2.2))
            if rng.random() < 0.5:
                turned = sources[0].rot_index + int(rng.choice([-2, -1, 1, 2]))
                targets = [q(*sources[0].p, turned % 8)]
            else:
                targets = random_side(rng, int(rng.integers(1, 3)), (0.3, 3.7))
            problem = TraversalProblem(
                source=PatchId(i=0, j=1, n=0),
                target=PatchId(i=0, j=1, n=1),
                context=(0, 1),
                regions=(LEFT, RIGHT),
                sources=tuple(sources),
                targets=tuple(targets),
            )

            with self.subTest(trial=trial):
                # When
                found = fast_verify_n0(sources, targets, [LEFT, RIGHT], STICK, table)
                model = build_traversal_model(problem, STICK, table, scene, params).model
                solution = solve_milp(model, mode=SolveMode.FEASIBILITY, backend="highs")

                # Expect
                self.assertEqual(solution.values is not None, found is not None)
                certified += found is not None
        self.assertGreater(certified, 20)
        self.assertLess(certified, 180)

class LayeringTests(unittest.TestCase):
    def test_densegraph_never_imports_the_query_layer(self):
        # Given
        package = Path(polytrek.densegraph.__file__).parent

        # When
        offenders = [
            path.name
            for path in sorted(package.glob("*.py"))
            if "from ..query" in path.read_text() or "polytrek.query" in path.read_text()
        ]

        # Expect
        self.assertEqual([], offenders)
