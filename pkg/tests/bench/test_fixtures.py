import unittest

from polytrek.bench import OBJECTS, SCENES, bugtrap, fixture, fixture_object
from polytrek.geometry import RigidObject, RotationTable, transform_object


class FixtureTests(unittest.TestCase):
    def test_every_fixture_has_free_query_poses(self):
        for name in SCENES:
            with self.subTest(name=name):
                # Given
                item = fixture(name)
                obj = fixture_object(item)
                table = RotationTable.for_dimension(obj.dim, RotationTable.default_count(obj.dim))

                # Expect
                self.assertEqual(name, item.name)
                self.assertEqual(obj.dim, item.scene.dim)
                for q in (item.start, item.goal):
                    posed = transform_object(obj, q, table)
                    self.assertTrue(all(item.scene.is_free(point) for point in posed))

    def test_objects_by_name(self):
        # Expect
        self.assertEqual(RigidObject.stick(1.2, 0.1), OBJECTS["stick"]())
        self.assertEqual(3, OBJECTS["pad"]().dim)
        self.assertEqual("l", fixture("2d-peg").obj)

    def test_bugtrap_scales_the_scene_and_the_queries(self):
        # When
        item = bugtrap(scale=2.0)

        # Expect
        self.assertEqual(12.0, float(item.scene.hi[0]))
        self.assertEqual(6.5, float(item.start.p[0]))
        self.assertEqual(6.0, float(item.goal.p[1]))

    def test_unknown_fixture(self):
        # Expect
        with self.assertRaises(KeyError):
            fixture("2d-maze")
