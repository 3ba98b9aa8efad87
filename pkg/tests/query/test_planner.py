import unittest

from polytrek.bench.complexity import two_box_cover
from polytrek.densegraph import BuildParams, build_dense_graph
from polytrek.errors import InvalidQuery
from polytrek.geometry import Configuration, RigidObject
from polytrek.query import Planner, QueryParams
from polytrek.roadmap import Roadmap

STICK = RigidObject.stick(0.4, 0.1)


class PlannerTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        coarse = two_box_cover()
        cls.roadmap = Roadmap.create(coarse)
        cls.roadmap.add_dense(build_dense_graph(coarse, STICK, BuildParams(n_t=12, n_r=4)))

    def test_planner_times_each_query(self):
        # Given
        planner = Planner.from_roadmap(self.roadmap, STICK, QueryParams(k=2))
        self.assertIsNone(planner.last_elapsed_ms)

        # When
        motion = planner.plan(Configuration(p=[3.5, 1.0], rot_index=0), Configuration(p=[0.5, 1.0], rot_index=0))

        # Expect
        self.assertFalse(motion.is_empty)
        self.assertGreaterEqual(planner.last_elapsed_ms, 0.0)
        self.assertEqual(STICK, planner.obj)

    def test_failed_query_is_still_timed(self):
        # Given
        planner = Planner.from_roadmap(self.roadmap, STICK)

        # When
        with self.assertRaises(InvalidQuery):
            planner.plan(Configuration(p=[0.05, 1.0], rot_index=0), Configuration(p=[0.5, 1.0], rot_index=0))

        # Expect
        self.assertIsNotNone(planner.last_elapsed_ms)

    def test_unknown_object_has_no_dense_graph(self):
        # Expect
        with self.assertRaises(InvalidQuery):
            Planner.from_roadmap(self.roadmap, RigidObject.segment(0.5))
