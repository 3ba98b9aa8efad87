import itertools
import tempfile
import unittest
from pathlib import Path

import numpy as np
import numpy.testing as npt
from scipy.optimize import linprog

from polytrek.errors import NumericalFailure
from polytrek.milp import BranchAndBound, MilpBuilder, SolveMode, Status, solve_lp, solve_milp
from polytrek.milp.relaxation import HighsRelaxation, RelaxationEngine
from polytrek.milp.simplex import LpResult
from polytrek.settings import override


def knapsack(capacity: float = 6.0):
    """Items (weight, value): a (4, 5), b (3, 4), c (2, 3)."""

    builder = MilpBuilder()
    items = builder.add_binaries(3, "item")
    builder.add_le({int(items[0]): 4.0, int(items[1]): 3.0, int(items[2]): 2.0}, capacity)
    builder.set_objective({int(items[0]): -5.0, int(items[1]): -4.0, int(items[2]): -3.0})
    model, _ = builder.build()
    return model


def switched():
    builder = MilpBuilder()
    y = builder.add_continuous(0.0, 10.0, "y")
    z = builder.add_binary("z")
    builder.add_le({y: 1.0, z: -10.0}, 0.0)
    builder.set_objective({y: -1.0, z: 3.0})
    model, _ = builder.build()
    return model



class FirstAnswer(RelaxationEngine):
    """Answers the first relaxation with a fixed result, then defers to HiGHS."""

    def __init__(self, model, first: LpResult):
        super().__init__(model)
        self._first = first
        self._highs = HighsRelaxation(model)
        self.calls = 0

    def solve(self, lower, upper) -> LpResult:
        self.calls += 1
        return self._first if self.calls == 1 else self._highs.solve(lower, upper)

class SolveMilpTests(unittest.TestCase):
    def test_should_solve_a_knapsack_to_optimality(self):
        # Given
        model = knapsack()

        for backend in ("builtin", "highs"):
            with self.subTest(backend=backend):

                # When
                solution = solve_milp(model, backend=backend)

                # Expect
                self.assertIs(Status.OPTIMAL, solution.status)
                self.assertAlmostEqual(-8.0, solution.objective)
                self.assertEqual([1, 0, 1], solution.binaries(model).tolist())

    def test_both_relaxation_engines_agree(self):
        # Given
        model = switched()

        for engine in ("dense", "highs"):
            with self.subTest(engine=engine):

                # When
                solution = solve_milp(model, engine=engine)

                # Expect
                self.assertAlmostEqual(-7.0, solution.objective)
                npt.assert_allclose(solution.values, [10.0, 1.0], atol=1e-9)

    def test_infeasible_model(self):
        # Given
        builder = MilpBuilder()
        flag = builder.add_binary()
        builder.add_ge({flag: 1.0}, 2.0)
        model, _ = builder.build()

        # When
        solution = solve_milp(model)

        # Expect
        self.assertIs(Status.INFEASIBLE, solution.status)
        self.assertIsNone(solution.values)

    def test_feasibility_mode_returns_an_integral_point(self):
        # Given
        model = knapsack()

        # When
        solution = solve_milp(model, mode=SolveMode.FEASIBILITY)

        # Expect
        self.assertTrue(solution.is_optimal)
        self.assertLessEqual(model.violation(solution.values), 1e-6)
        self.assertEqual(0.0, model.integrality_gap(solution.values))

    def test_node_limit_reports_iteration_limit(self):
        # When
        solution = BranchAndBound(knapsack(), node_limit=1).solve()

        # Expect
        self.assertIs(Status.ITERATION_LIMIT, solution.status)

    def test_builtin_search_is_deterministic(self):
        # When
        first = solve_milp(knapsack(7.0))
        second = solve_milp(knapsack(7.0))

        # Expect
        self.assertEqual(first, second)

    def test_debug_dump_dir_receives_the_model(self):
        # Given
        with tempfile.TemporaryDirectory() as directory:
            with override(debug_dump_dir=Path(directory)):

                # When
                solve_milp(knapsack(), tag="knapsack")

            # Expect
            self.assertTrue((Path(directory) / "knapsack.lp").exists())

    def test_unknown_backend_is_rejected(self):
        # Expect
        with self.assertRaises(ValueError):
            solve_milp(knapsack(), backend="cbc")

    def test_auto_backend_switches_to_highs_above_the_binary_limit(self):
        for limit, chosen in ((48, "builtin"), (2, "highs")):
            with self.subTest(limit=limit):
                # Given
                with override(builtin_binaries=limit), self.assertLogs("polytrek.milp.solve", "DEBUG") as logs:

                    # When
                    solution = solve_milp(knapsack())

                # Expect
                self.assertTrue(any(f"auto backend chose {chosen} for 3 binaries" in line for line in logs.output))
                self.assertAlmostEqual(-8.0, solution.objective)


class BranchAndBoundRecoveryTests(unittest.TestCase):
    def test_rejected_integral_node_is_branched_instead_of_pruned(self):
        # Given
        model = knapsack()
        overfull = LpResult(True, np.ones(3), -12.0)

        # When
        solution = BranchAndBound(model, engine=FirstAnswer(model, overfull)).solve()

        # Expect
        self.assertIs(Status.OPTIMAL, solution.status)
        self.assertAlmostEqual(-8.0, solution.objective)
        self.assertEqual([1, 0, 1], solution.binaries(model).tolist())

    def test_root_bound_above_the_incumbent_raises(self):
        # Given
        model = knapsack()
        honest = HighsRelaxation(model).solve(np.array(model.lower), np.array(model.upper))
        inflated = LpResult(True, honest.x, honest.fun + 100.0)

        # Expect
        with self.assertRaises(NumericalFailure):
            BranchAndBound(model, engine=FirstAnswer(model, inflated)).solve()


class SolveLpTests(unittest.TestCase):
    def test_relaxation_may_be_fractional(self):
        # When
        solution = solve_lp(knapsack())

        # Expect
        self.assertTrue(solution.is_optimal)
        self.assertAlmostEqual(-8.25, solution.objective)
        npt.assert_allclose(solution.values, [0.25, 1.0, 1.0], atol=1e-9)


def random_model(rng):
    n_bin, n_cont = int(rng.integers(1, 7)), int(rng.integers(0, 4))
    builder = MilpBuilder()
    conts = [builder.add_continuous(-2.0, 2.0, f"x{k}") for k in range(n_cont)]
    bins = [int(b) for b in builder.add_binaries(n_bin, "b")]
    columns = conts + bins
    for _ in range(int(rng.integers(1, 5))):
        builder.add_le({column: float(w) for column, w in zip(columns, rng.normal(size=len(columns)))}, rng.normal())
    if rng.random() < 0.3:
        builder.add_eq({column: float(w) for column, w in zip(columns, rng.integers(-2, 3, size=len(columns)))}, 1.0)
    builder.set_objective({column: float(w) for column, w in zip(columns, rng.normal(size=len(columns)))})
    model, _ = builder.build()
    return model


def enumerate_binaries(model):
    """Best objective over every binary assignment, each completed by an LP over the continuous part."""

    A_ub, b_ub, A_eq, b_eq = model.split()
    best = np.inf
    for assignment in itertools.product((0.0, 1.0), repeat=model.n_bin):
        lower, upper = np.array(model.lower), np.array(model.upper)
        lower[model.binary_slice] = upper[model.binary_slice] = assignment
        result = linprog(
            model.objective,
            A_ub=A_ub if A_ub.shape[0] else None,
            b_ub=b_ub if A_ub.shape[0] else None,
            A_eq=A_eq if A_eq.shape[0] else None,
            b_eq=b_eq if A_eq.shape[0] else None,
            bounds=np.column_stack([lower, upper]),
            method="highs",
        )
        if result.status == 0:
            best = min(best, float(result.fun))
    return best


class ExhaustiveOracleTests(unittest.TestCase):
    def test_builtin_search_matches_enumeration_on_random_models(self):
        # Given
        rng = np.random.default_rng(31)

        for trial in range(200):
            model = random_model(rng)

            with self.subTest(trial=trial):
                # When
                solution = solve_milp(model, backend="builtin")
                expected = enumerate_binaries(model)

                # Expect
                if np.isinf(expected):
                    self.assertIs(Status.INFEASIBLE, solution.status)
                else:
                    self.assertIs(Status.OPTIMAL, solution.status)
                    self.assertAlmostEqual(expected, solution.objective, delta=1e-6 * (1.0 + abs(expected)))
