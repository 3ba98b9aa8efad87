import struct
import tempfile
import unittest
from pathlib import Path

from polytrek.bench.complexity import two_box_cover
from polytrek.densegraph import BuildParams, build_dense_graph
from polytrek.errors import RoadmapFormatError, UnknownRoadmapVersion
from polytrek.geometry import RigidObject
from polytrek.io import MAGIC, dump_roadmap, load_roadmap, parse_roadmap, save_roadmap
from polytrek.roadmap import Roadmap

STICK = RigidObject.stick(0.4, 0.1)


class RoadmapFileTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        coarse = two_box_cover()
        cls.roadmap = Roadmap.create(coarse)
        cls.roadmap.add_dense(build_dense_graph(coarse, STICK, BuildParams(n_t=12, n_r=4)))
        cls.data = dump_roadmap(cls.roadmap)

    def test_file_starts_with_magic_and_version(self):
        # Expect
        self.assertEqual(MAGIC, self.data[:4])
        self.assertEqual(1, struct.unpack_from("<H", self.data, 4)[0])
        self.assertEqual(b"META", self.data[6:10])

    def test_loaded_roadmap_saves_to_the_same_bytes(self):
        # When
        loaded = parse_roadmap(self.data)

        # Expect
        self.assertEqual(self.data, dump_roadmap(loaded))
        self.assertEqual(self.roadmap.id, loaded.id)
        self.assertEqual(self.roadmap.dense_for(STICK).edges, loaded.dense_for(STICK).edges)

    def test_roadmap_file_on_disk(self):
        with tempfile.TemporaryDirectory() as folder:
            # Given
            path = Path(folder) / "scene.ptrm"

            # When
            save_roadmap(self.roadmap, path)

            # Expect
            self.assertEqual(self.data, path.read_bytes())
            self.assertTrue(load_roadmap(path).has_dense(STICK))

    def test_unknown_sections_are_skipped(self):
        # Given
        extra = struct.pack("<4sI", b"XTRA", 2) + b"{}"

        # When
        loaded = parse_roadmap(self.data + extra)

        # Expect
        self.assertTrue(loaded.has_dense(STICK))

    def test_damaged_files_are_rejected(self):
        # Expect
        for data in (b"PT", b"XXXX" + self.data[4:], self.data[:-5], self.data[:6]):
            with self.subTest(size=len(data)):
                with self.assertRaises(RoadmapFormatError):
                    parse_roadmap(data)

    def test_newer_versions_are_refused(self):
        # Given
        data = MAGIC + struct.pack("<H", 2) + self.data[6:]

        # Expect
        with self.assertRaises(UnknownRoadmapVersion):
            parse_roadmap(data)
