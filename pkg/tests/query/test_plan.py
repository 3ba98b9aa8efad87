import math
import unittest
from functools import lru_cache

import networkx as nx

from polytrek.bench.complexity import two_box_cover
from polytrek.densegraph import BuildParams, PatchId, build_dense_graph
from polytrek.eda import MessageBus, PlanFound, QueryAttached, Subscriber
from polytrek.errors import Disconnected, InvalidQuery, NoPath
from polytrek.geometry import Configuration, RigidObject
from polytrek.motion import MotionKind
from polytrek.query import QueryParams, connect_query, intra_patch_walk, plan, query_contexts, rotation_step_cost
from polytrek.query.plan import GOAL, START, canonical_graph

STICK = RigidObject.stick(0.4, 0.1)
RIGHT_SIDE = PatchId(i=0, j=1, n=0)
LEFT_SIDE = PatchId(i=0, j=1, n=1)


@lru_cache(maxsize=None)
def roadmap():
    coarse = two_box_cover()
    return coarse, build_dense_graph(coarse, STICK, BuildParams(n_t=12, n_r=4))


def q(x, y, rot_index=0):
    return Configuration(p=[x, y], rot_index=rot_index)


class QueryContextTests(unittest.TestCase):
    def test_contexts_list_single_polytopes_before_pairs(self):
        # Given
        coarse, dense = roadmap()

        # Expect
        self.assertEqual([(1, 1)], query_contexts(coarse, dense, q(3.5, 1.0)))
        self.assertEqual([(0, 0), (1, 1)], query_contexts(coarse, dense, q(2.0, 1.0)))
        self.assertEqual([], query_contexts(coarse, dense, q(0.05, 1.0)))

    def test_rotation_outside_the_table_is_invalid(self):
        # Given
        coarse, dense = roadmap()

        # Expect
        with self.assertRaises(InvalidQuery):
            query_contexts(coarse, dense, q(1.0, 1.0, 7))

    def test_dimension_mismatch_is_invalid(self):
        # Given
        coarse, dense = roadmap()

        # Expect
        with self.assertRaises(InvalidQuery):
            query_contexts(coarse, dense, Configuration(p=[1.0, 1.0, 0.0], rot_index=0))


class ConnectQueryTests(unittest.TestCase):
    def tearDown(self):
        MessageBus().reset()

    def test_nearest_patch_is_attached_first(self):
        # Given
        coarse, dense = roadmap()
        seen = []
        MessageBus().subscribe(Subscriber[QueryAttached](seen.append))

        # When
        attachments = connect_query(coarse, dense, q(3.5, 1.0))

        # Expect
        self.assertEqual([RIGHT_SIDE, LEFT_SIDE], [a.patch for a in attachments])
        self.assertAlmostEqual(1.0, attachments[0].cost)
        self.assertEqual(q(3.5, 1.0), attachments[0].waypoints[0])
        self.assertEqual(("start", 2), (seen[0].role, seen[0].attachments))

    def test_k_limits_the_attachments(self):
        # Given
        coarse, dense = roadmap()

        # When
        attachments = connect_query(coarse, dense, q(0.5, 1.0), QueryParams(k=1), role="goal")

        # Expect
        self.assertEqual([LEFT_SIDE], [a.patch for a in attachments])

    def test_patch_member_attaches_at_no_cost(self):
        # Given
        coarse, dense = roadmap()
        member = dense.patch(RIGHT_SIDE).configs[0]

        # When
        attachments = connect_query(coarse, dense, member, QueryParams(k=1))

        # Expect
        self.assertEqual(0.0, attachments[0].cost)
        self.assertEqual(member, attachments[0].config)

    def test_query_outside_the_cover_is_invalid(self):
        # Given
        coarse, dense = roadmap()

        # Expect
        with self.assertRaises(InvalidQuery):
            connect_query(coarse, dense, q(0.05, 1.0))

    def test_graph_without_patches_is_disconnected(self):
        # Given
        coarse, dense = roadmap()
        empty = dense.model_copy(update={"patches": (), "edges": ()})

        # Expect
        with self.assertRaises(Disconnected):
            connect_query(coarse, empty, q(3.5, 1.0))


class PlanTests(unittest.TestCase):
    def tearDown(self):
        MessageBus().reset()

    def test_plan_crosses_the_overlap(self):
        # Given
        coarse, dense = roadmap()
        found = []
        MessageBus().subscribe(Subscriber[PlanFound](found.append))

        # When
        motion = plan(coarse, dense, q(3.5, 1.0), q(0.5, 1.0))

        # Expect
        waypoints = motion.waypoints()
        self.assertEqual(q(3.5, 1.0), waypoints[0].q)
        self.assertEqual(q(0.5, 1.0), waypoints[-1].q)
        self.assertAlmostEqual(3.0, motion.cost)
        self.assertIs(MotionKind.INTER_VERTEX, motion.segments[0].kind)
        self.assertAlmostEqual(3.0, found[0].cost)

    def test_same_start_and_goal_is_an_empty_plan(self):
        # Given
        coarse, dense = roadmap()

        # When
        motion = plan(coarse, dense, q(3.5, 1.0), q(3.5, 1.0))

        # Expect
        self.assertTrue(motion.is_empty)
        self.assertEqual(0.0, motion.cost)

    def test_direct_motion_inside_one_polytope(self):
        # Given
        coarse, dense = roadmap()

        # When
        motion = plan(coarse, dense, q(0.5, 1.0), q(1.0, 1.0))

        # Expect
        self.assertEqual(1, len(motion.segments))
        self.assertAlmostEqual(0.5, motion.cost)

    def test_disconnected_attachments_have_no_path(self):
        # Given
        coarse, dense = roadmap()
        cut = dense.model_copy(update={"edges": ()})

        # Expect
        with self.assertRaises(NoPath):
            plan(coarse, cut, q(3.5, 1.0), q(0.5, 1.0), QueryParams(k=1))


class CanonicalGraphTests(unittest.TestCase):
    def test_equal_cost_routes_resolve_the_same_way_in_any_insertion_order(self):
        # Given
        upper, lower = PatchId(i=0, j=1, n=0), PatchId(i=0, j=2, n=0)
        edges = [(START, upper, 1.0), (upper, GOAL, 1.0), (START, lower, 1.0), (lower, GOAL, 1.0)]
        forward, backward = nx.Graph(), nx.Graph()
        forward.add_weighted_edges_from(edges)
        backward.add_weighted_edges_from((v, u, w) for u, v, w in reversed(edges))

        # When
        routes = [nx.dijkstra_path(canonical_graph(graph), START, GOAL) for graph in (forward, backward)]

        # Expect
        self.assertEqual([START, upper, GOAL], routes[0])
        self.assertEqual(routes[0], routes[1])

    def test_edge_weights_survive(self):
        # Given
        graph = nx.Graph()
        graph.add_edge(GOAL, PatchId(i=1, j=2, n=3), weight=2.5)

        # When
        ordered = canonical_graph(graph)

        # Expect
        self.assertEqual(2.5, ordered.edges[PatchId(i=1, j=2, n=3), GOAL]["weight"])


class IntraPatchTests(unittest.TestCase):
    def test_walk_follows_the_patch_adjacency(self):
        # Given
        _, dense = roadmap()
        patch = dense.patch(RIGHT_SIDE)
        entry = next(c for c in patch.configs if c.rot_index == 0 and abs(c.p[1] - 0.5) < 1e-9)
        departure = next(c for c in patch.configs if c.rot_index == 0 and abs(c.p[1] - 1.5) < 1e-9)

        # When
        walk = intra_patch_walk(patch, entry, departure, rotation_step_cost(dense))

        # Expect
        self.assertEqual(3, len(walk))
        self.assertEqual(entry, walk[0])
        self.assertEqual(departure, walk[-1])

    def test_walk_rejects_foreign_configurations(self):
        # Given
        _, dense = roadmap()
        patch = dense.patch(RIGHT_SIDE)

        # Expect
        with self.assertRaises(ValueError):
            intra_patch_walk(patch, patch.configs[0], q(0.5, 1.0), 1.0)

    def test_rotation_step_cost_defaults_to_one_step_of_arc(self):
        # Given
        _, dense = roadmap()

        # Expect
        self.assertAlmostEqual(math.pi / 2.0 * math.hypot(0.2, 0.05), rotation_step_cost(dense))
        self.assertEqual(0.7, rotation_step_cost(dense, QueryParams(rotation_cost=0.7)))
