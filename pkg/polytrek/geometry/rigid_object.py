from __future__ import annotations

import hashlib
from functools import cached_property
from typing_extensions import Any, Optional, Self

import networkx as nx
import numpy as np
from pydantic import Field, model_validator
from scipy.optimize import linprog

from ..errors import InvalidObject
from ..value import Value
from ..value_object import FloatArray, IntArray, ValueObject
from .rotation import RotationTable


class ObjectFingerprint(Value[str]):
    """sha256 of the canonical body-frame vertex list."""

    ...


class Configuration(ValueObject):
    """A pose q = (p, R): translation `p` and an index into the rotation table."""

    p: FloatArray
    rot_index: int = Field(ge=0)

    @property
    def dim(self) -> int:
        return int(self.p.shape[0])

    def translation_distance(self, other: Configuration) -> float:
        return float(np.abs(other.p - self.p).sum())


class RigidObject(ValueObject):
    """
    A rigid polygonal (2D) or polyhedral (3D) object, stored in its body frame with the geometric center at the
    origin. `edges` index pairs of `vertices`; in 3D `faces` is a triangle mesh of the surface.

    Use `RigidObject.create` to build one from world-frame vertices and an optional center; it checks that the edge
    graph is connected and that the center lies inside the vertex hull.
    """

    vertices: FloatArray
    edges: IntArray
    faces: IntArray = Field(default_factory=lambda: np.zeros((0, 3), dtype=np.int64))

    @model_validator(mode="after")
    def _check_shape(self) -> RigidObject:
        if self.vertices.ndim != 2 or self.vertices.shape[1] not in (2, 3) or self.vertices.shape[0] == 0:
            raise ValueError(f"vertices must be a non-empty (n, 2) or (n, 3) array, got {self.vertices.shape}")
        n = self.vertices.shape[0]
        edges = self.edges.reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("edge index out of range")
        faces = self.faces.reshape(-1, 3)
        if faces.size and (faces.min() < 0 or faces.max() >= n):
            raise ValueError("face index out of range")
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(map(tuple, edges))
        graph.add_edges_from((int(a), int(b)) for face in faces for a, b in ((face[0], face[1]), (face[1], face[2])))
        if not nx.is_connected(graph):
            raise ValueError("the object's edge graph must be connected")
        return self

    @classmethod
    def create(cls, vertices: Any, edges: Any, faces: Any = None, center: Any = None) -> Self:
        """
        Raises:
            InvalidObject: The center is outside the hull of the vertices, or the geometry is malformed.
        """

        vertices = np.asarray(vertices, dtype=np.float64)
        if vertices.ndim != 2 or vertices.shape[0] == 0:
            raise InvalidObject("an object needs at least one vertex")
        center = vertices.mean(axis=0) if center is None else np.asarray(center, dtype=np.float64)
        if not _in_hull(center, vertices):
            raise InvalidObject(
                f"center {center.tolist()} lies outside the object; choose a center inside the object (an explicit "
                "`c` line in the object file)"
            )
        edges = np.asarray(edges if edges is not None else np.zeros((0, 2)), dtype=np.int64).reshape(-1, 2)
        faces = np.asarray(faces if faces is not None else np.zeros((0, 3)), dtype=np.int64).reshape(-1, 3)
        try:
            return cls(vertices=vertices - center, edges=edges, faces=faces)
        except ValueError as error:
            raise InvalidObject(str(error)) from error

    @classmethod
    def point(cls, dim: int = 2) -> Self:
        return cls(vertices=np.zeros((1, dim)), edges=np.zeros((0, 2)))

    @classmethod
    def stick(cls, length: float = 1.2, width: float = 0.1) -> Self:
        hl, hw = length / 2.0, width / 2.0
        vertices = [[-hl, -hw], [hl, -hw], [hl, hw], [-hl, hw]]
        return cls.create(vertices, _cycle(4))

    @classmethod
    def segment(cls, length: float = 1.0) -> Self:
        """A zero-width stick: two vertices and one edge."""

        return cls.create([[-length / 2.0, 0.0], [length / 2.0, 0.0]], [[0, 1]])

    @classmethod
    def l_shape(
        cls, long: float = 1.2, short: float = 0.8, width: float = 0.1, center: Optional[Any] = None
    ) -> Self:
        """
        L polygon with legs along +x (`long`) and +y (`short`). The default center sits in the corner square,
        from where every vertex is visible.
        """

        vertices = [[0.0, 0.0], [long, 0.0], [long, width], [width, width], [width, short], [0.0, short]]
        center = [width / 2.0, width / 2.0] if center is None else center
        return cls.create(vertices, _cycle(6), center=center)

    @classmethod
    def box3d(cls, sx: float = 1.0, sy: float = 0.8, sz: float = 0.1) -> Self:
        hx, hy, hz = sx / 2.0, sy / 2.0, sz / 2.0
        vertices = [[x, y, z] for z in (-hz, hz) for y in (-hy, hy) for x in (-hx, hx)]
        edges = [[0, 1], [2, 3], [4, 5], [6, 7], [0, 2], [1, 3], [4, 6], [5, 7], [0, 4], [1, 5], [2, 6], [3, 7]]
        faces = [
            [0, 1, 3], [0, 3, 2], [4, 5, 7], [4, 7, 6],
            [0, 1, 5], [0, 5, 4], [2, 3, 7], [2, 7, 6],
            [0, 2, 6], [0, 6, 4], [1, 3, 7], [1, 7, 5],
        ]  # fmt: skip
        return cls.create(vertices, edges, faces)

    @classmethod
    def tetrahedron(cls, size: float = 1.0) -> Self:
        vertices = np.array([[0.0, 0.0, 0.0], [size, 0.0, 0.0], [0.0, size, 0.0], [0.0, 0.0, size]])
        edges = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
        faces = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
        return cls.create(vertices, edges, faces)

    @classmethod
    def l_shape_3d(cls, long: float = 1.2, short: float = 0.8, width: float = 0.1, depth: float = 0.1) -> Self:
        """The 2D L extruded along z."""

        outline = [[0.0, 0.0], [long, 0.0], [long, width], [width, width], [width, short], [0.0, short]]
        vertices = [[x, y, z] for z in (0.0, depth) for x, y in outline]
        edges = [[i, (i + 1) % 6] for i in range(6)] + [[6 + i, 6 + (i + 1) % 6] for i in range(6)]
        edges += [[i, i + 6] for i in range(6)]
        cap = [[3, 4, 5], [3, 5, 0], [3, 0, 1], [3, 1, 2]]
        faces = cap + [[a + 6, b + 6, c + 6] for a, b, c in cap]
        for i in range(6):
            j = (i + 1) % 6
            faces += [[i, j, j + 6], [i, j + 6, i + 6]]
        return cls.create(vertices, edges, faces, center=[width / 2.0, width / 2.0, depth / 2.0])

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @cached_property
    def max_radius(self) -> float:
        return float(np.linalg.norm(self.vertices, axis=1).max())

    @cached_property
    def length(self) -> float:
        """Largest distance between two vertices."""

        diffs = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.linalg.norm(diffs, axis=-1).max())

    @cached_property
    def body_points(self) -> np.ndarray:
        """The center (row 0, the origin) followed by the vertices."""

        return np.vstack([np.zeros((1, self.dim)), self.vertices])

    @cached_property
    def surface_edges(self) -> np.ndarray:
        """Unique vertex pairs from `edges` and from the face triangles, sorted."""

        pairs = {tuple(sorted((int(a), int(b)))) for a, b in self.edges.reshape(-1, 2)}
        for face in self.faces.reshape(-1, 3):
            for a, b in ((face[0], face[1]), (face[1], face[2]), (face[2], face[0])):
                pairs.add(tuple(sorted((int(a), int(b)))))
        return np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)

    @cached_property
    def static_pairs(self) -> np.ndarray:
        """
        Segments certifying a static pose, as index pairs into `body_points`: every surface edge and every
        center-to-vertex segment.
        """

        edges = self.surface_edges + 1
        spokes = np.array([[0, i + 1] for i in range(self.n_vertices)])
        return np.vstack([edges.reshape(-1, 2), spokes.reshape(-1, 2)]).astype(np.int64)

    def pieces(self) -> list[np.ndarray]:
        """
        Convex pieces whose union is the object body: center + edge triangles in 2D, center + face tetrahedra in 3D.
        A point object is a single point and an object without faces falls back to center + edge pieces.
        """

        if self.n_vertices == 1:
            return [self.body_points[1:2]]
        origin = np.zeros((1, self.dim))
        if self.dim == 3 and self.faces.size:
            return [np.vstack([origin, self.vertices[face]]) for face in self.faces.reshape(-1, 3)]
        return [np.vstack([origin, self.vertices[list(edge)]]) for edge in self.edges.reshape(-1, 2)]

    def fingerprint(self) -> ObjectFingerprint:
        canonical = np.round(self.vertices, 9) + 0.0
        digest = hashlib.sha256(canonical.astype("<f8").tobytes() + str(canonical.shape).encode()).hexdigest()
        return ObjectFingerprint(digest)

    def same_geometry(self, other: RigidObject) -> bool:
        return self == other


def transform_object(obj: RigidObject, q: Configuration, table: RotationTable) -> np.ndarray:
    """World-frame vertex positions R_q v + p."""

    if not 0 <= q.rot_index < table.n_r:
        raise ValueError(f"rotation index {q.rot_index} outside table of {table.n_r}")
    return obj.vertices @ table[q.rot_index].T + q.p


def posed_points(obj: RigidObject, positions: np.ndarray, rotations: np.ndarray, table: RotationTable) -> np.ndarray:
    """
    World-frame `body_points` for many poses at once: (n, 1 + n_vertices, dim) for n positions and rotation
    indices.
    """

    rotated = np.einsum("kij,pj->kpi", table.matrices, obj.body_points)
    return rotated[np.asarray(rotations, dtype=np.int64)] + np.asarray(positions)[:, None, :]


def _cycle(n: int) -> list[list[int]]:
    return [[i, (i + 1) % n] for i in range(n)]


def _in_hull(point: np.ndarray, vertices: np.ndarray) -> bool:
    n = vertices.shape[0]
    if n == 1:
        return bool(np.allclose(point, vertices[0]))
    # Feasibility of point = V^T w, sum w = 1, w >= 0
    A_eq = np.vstack([vertices.T, np.ones((1, n))])
    b_eq = np.concatenate([point, [1.0]])
    result = linprog(np.zeros(n), A_eq=A_eq, b_eq=b_eq, bounds=[(0.0, None)] * n, method="highs")
    return result.status == 0
