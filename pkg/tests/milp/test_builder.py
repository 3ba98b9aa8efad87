import unittest

import numpy as np
import numpy.testing as npt
from pydantic import ValidationError

from polytrek.milp import MilpBuilder, MilpModel, Sense


class MilpBuilderTests(unittest.TestCase):
    def test_build_orders_continuous_variables_first(self):
        # Given
        builder = MilpBuilder(big_m=50.0)
        flag = builder.add_binary("flag")
        x = builder.add_continuous(0.0, 10.0, "x")
        builder.add_le({x: 1.0, flag: -10.0}, 0.0)
        builder.set_objective({x: -1.0, flag: 1.0})

        # When
        model, position = builder.build()

        # Expect
        self.assertEqual((1, 1), (model.n_cont, model.n_bin))
        self.assertEqual([1, 0], position.tolist())
        npt.assert_allclose(model.objective, [-1.0, 1.0])
        npt.assert_allclose(model.matrix.toarray(), [[1.0, -10.0]])
        self.assertEqual(("x_1", "flag_0"), model.names)
        self.assertEqual(50.0, model.big_m)

    def test_add_ge_is_stored_as_a_negated_le_row(self):
        # Given
        builder = MilpBuilder()
        x = builder.add_continuous()
        builder.add_ge({x: 2.0}, 1.0)

        # When
        model, _ = builder.build()

        # Expect
        npt.assert_allclose(model.matrix.toarray(), [[-2.0]])
        npt.assert_allclose(model.rhs, [-1.0])
        self.assertEqual([Sense.LE.value], model.senses.tolist())

    def test_add_rows_adds_a_block_and_drops_zero_coefficients(self):
        # Given
        builder = MilpBuilder()
        x = builder.add_continuous_block(np.zeros(2), np.ones(2), "x")
        cols = np.array([[x[0], x[1]], [x[0], x[1]]])
        values = np.array([[1.0, 0.0], [1.0, 1.0]])

        # When
        builder.add_rows(cols, values, np.array([0.5, 1.5]), Sense.EQ)
        model, _ = builder.build()

        # Expect
        self.assertEqual(2, model.n_rows)
        self.assertEqual(3, model.values.shape[0])
        npt.assert_allclose(model.matrix.toarray(), [[1.0, 0.0], [1.0, 1.0]])

    def test_fix_pins_a_variable(self):
        # Given
        builder = MilpBuilder()
        b = builder.add_binary()
        builder.fix(b, 1.0)

        # When
        model, _ = builder.build()

        # Expect
        self.assertEqual((1.0, 1.0), (model.lower[0], model.upper[0]))

    def test_model_rejects_unbounded_binaries(self):
        # Expect
        with self.assertRaises(ValidationError):
            MilpModel(
                n_cont=0,
                n_bin=1,
                objective=[0.0],
                lower=[0.0],
                upper=[2.0],
                rows=[],
                cols=[],
                values=[],
                rhs=[],
                senses=[],
            )

    def test_violation_and_digest(self):
        # Given
        builder = MilpBuilder()
        x = builder.add_continuous(0.0, 1.0)
        builder.add_le({x: 1.0}, 0.5)
        model, _ = builder.build()
        same, _ = builder.build()

        # Expect
        self.assertAlmostEqual(0.25, model.violation(np.array([0.75])))
        self.assertEqual(0.0, model.violation(np.array([0.25])))
        self.assertEqual(model.digest(), same.digest())
