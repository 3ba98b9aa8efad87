"""End-to-end runs over the built-in fixtures with default parameters."""

import time
from unittest import TestCase

from polytrek.bench import fixture, fixture_object, stick, validate_path
from polytrek.decompose import DecomposeParams, decompose
from polytrek.densegraph import BuildParams, build_dense_graph
from polytrek.io import dump_roadmap
from polytrek.motion import MotionKind
from polytrek.query import Planner
from polytrek.roadmap import Roadmap

SEED = 7


class CornerTests(TestCase):
    def test_offline_phase_fits_two_minutes_and_the_plan_validates(self):
        # Given
        item = fixture("2d-corner")
        obj = fixture_object(item)
        started = time.perf_counter()

        # When
        coarse = decompose(item.scene, DecomposeParams(seed=SEED))
        dense = build_dense_graph(coarse, obj, BuildParams())
        offline = time.perf_counter() - started
        planner = Planner(coarse, dense)
        motion = planner.plan(item.start, item.goal)

        # Expect
        self.assertGreaterEqual(coarse.coverage, 0.95)
        self.assertLess(offline, 120.0)
        self.assertLess(planner.last_elapsed_ms, 500.0)
        self.assertEqual(item.start, motion.waypoints()[0].q)
        self.assertEqual(item.goal, motion.waypoints()[-1].q)
        self.assertTrue(validate_path(motion, item.scene, obj, dense.table).passed)


class PegTests(TestCase):
    def test_l_object_reuses_the_stick_cover_and_the_plan_validates(self):
        # Given
        item = fixture("2d-peg")
        obj = fixture_object(item)
        roadmap = Roadmap.create(decompose(item.scene, DecomposeParams(seed=SEED)))
        cover = dump_roadmap(Roadmap.create(roadmap.coarse))
        roadmap.add_dense(build_dense_graph(roadmap.coarse, stick(), BuildParams()))

        # When
        roadmap.add_dense(build_dense_graph(roadmap.coarse, obj, BuildParams()))
        planner = Planner.from_roadmap(roadmap, obj)
        motion = planner.plan(item.start, item.goal)

        # Expect
        self.assertEqual(cover, dump_roadmap(Roadmap.create(roadmap.coarse)))
        self.assertTrue(validate_path(motion, item.scene, obj, planner.dense.table).passed)


class SlabTests(TestCase):
    def test_pad_translates_through_the_hole_and_the_plan_validates(self):
        # Given
        item = fixture("3d-slab")
        obj = fixture_object(item)
        coarse = decompose(item.scene, DecomposeParams(seed=SEED))
        dense = build_dense_graph(coarse, obj, BuildParams())

        # When
        motion = Planner(coarse, dense).plan(item.start, item.goal)

        # Expect
        self.assertTrue(validate_path(motion, item.scene, obj, dense.table).passed)
        for segment in motion.segments:
            if segment.kind is MotionKind.INTER_VERTEX:
                self.assertEqual(1, len({q.rot_index for q in segment.waypoints}))
