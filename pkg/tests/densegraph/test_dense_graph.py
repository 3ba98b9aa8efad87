import unittest

from polytrek.bench.complexity import two_box_cover
from polytrek.densegraph import (
    BuildParams,
    BuildStats,
    PatchId,
    TraversalEdge,
    build_dense_graph,
    candidate_pairs,
    free_configuration_count,
)
from polytrek.eda import DenseGraphBuilt, MessageBus, PatchesGrouped, Subscriber, TraversalCertified
from polytrek.geometry import Configuration, RigidObject, RotationTable

STICK = RigidObject.stick(0.4, 0.1)
PARAMS = BuildParams(n_t=12, n_r=4)
RIGHT_SIDE = PatchId(i=0, j=1, n=0)
LEFT_SIDE = PatchId(i=0, j=1, n=1)


class BuildDenseGraphTests(unittest.TestCase):
    def tearDown(self):
        MessageBus().reset()

    def test_two_patches_joined_by_one_certified_edge(self):
        # When
        dense = build_dense_graph(two_box_cover(), STICK, PARAMS)

        # Expect
        self.assertEqual(2, dense.n_patches)
        self.assertEqual(1, len(dense.edges))
        self.assertEqual((RIGHT_SIDE, LEFT_SIDE), (dense.edges[0].source, dense.edges[0].target))
        self.assertEqual((0, 1), dense.edges[0].context)
        self.assertEqual(BuildStats(patches=2, problems=1, fast_path=1, certified=1), dense.stats)
        self.assertIs(dense.edges[0], dense.edge(LEFT_SIDE, RIGHT_SIDE))
        self.assertEqual(2, len(dense.patches_on(1)))
        self.assertAlmostEqual(1.0, dense.graph()[RIGHT_SIDE][LEFT_SIDE]["weight"])

    def test_build_publishes_progress_events(self):
        # Given
        seen = []
        MessageBus().subscribe(
            Subscriber[PatchesGrouped](seen.append),
            Subscriber[TraversalCertified](seen.append),
            Subscriber[DenseGraphBuilt](seen.append),
        )

        # When
        build_dense_graph(two_box_cover(), STICK, PARAMS)

        # Expect
        self.assertEqual([PatchesGrouped, TraversalCertified, DenseGraphBuilt], [type(event) for event in seen])
        self.assertEqual(24, seen[0].free_configs)
        self.assertEqual("0-1-0", seen[1].source)

    def test_resume_retries_only_unverified_pairs(self):
        # Given
        coarse = two_box_cover()
        built = build_dense_graph(coarse, STICK, PARAMS)
        previous = built.model_copy(
            update={
                "edges": (),
                "unverified": ((RIGHT_SIDE, LEFT_SIDE),),
                "stats": BuildStats(patches=2, problems=1, milp_solves=1, unverified=1),
            }
        )

        # When
        resumed = build_dense_graph(coarse, STICK, PARAMS, previous=previous)

        # Expect
        self.assertEqual(1, len(resumed.edges))
        self.assertEqual((), resumed.unverified)
        self.assertEqual(2, resumed.stats.problems)
        self.assertEqual(1, resumed.stats.fast_path)
        self.assertEqual(1, resumed.stats.milp_solves)

    def test_resume_without_unverified_pairs_keeps_the_graph(self):
        # Given
        coarse = two_box_cover()
        built = build_dense_graph(coarse, STICK, PARAMS)

        # When
        resumed = build_dense_graph(coarse, STICK, PARAMS, previous=built)

        # Expect
        self.assertEqual(built.edges, resumed.edges)
        self.assertEqual(built.patches, resumed.patches)

    def test_resume_requires_the_same_object(self):
        # Given
        coarse = two_box_cover()
        built = build_dense_graph(coarse, STICK, PARAMS)

        # Expect
        with self.assertRaises(ValueError):
            build_dense_graph(coarse, RigidObject.stick(0.3, 0.1), PARAMS, previous=built)

    def test_candidate_pairs_share_a_polytope(self):
        # Given
        dense = build_dense_graph(two_box_cover(), STICK, PARAMS)

        # Expect
        self.assertEqual([(RIGHT_SIDE, LEFT_SIDE)], candidate_pairs(dense.patches))


class FreeConfigurationCountTests(unittest.TestCase):
    def test_counts_free_boundary_configurations(self):
        # Given
        table = RotationTable.for_dimension(2, 4)

        # Expect
        self.assertEqual(24, free_configuration_count(two_box_cover(), STICK, table, PARAMS))


class TraversalEdgeTests(unittest.TestCase):
    def test_oriented_reverses_from_the_target_side(self):
        # Given
        first = Configuration(p=[2.5, 1.0], rot_index=0)
        last = Configuration(p=[1.5, 1.0], rot_index=0)
        edge = TraversalEdge(source=RIGHT_SIDE, target=LEFT_SIDE, waypoints=(first, last), cost=1.0)

        # Expect
        self.assertEqual((first, last), edge.oriented(RIGHT_SIDE))
        self.assertEqual((last, first), edge.oriented(LEFT_SIDE))

    def test_an_edge_needs_both_ends(self):
        # Expect
        with self.assertRaises(ValueError):
            TraversalEdge(
                source=RIGHT_SIDE, target=LEFT_SIDE, waypoints=(Configuration(p=[0.0, 0.0], rot_index=0),), cost=0.0
            )
