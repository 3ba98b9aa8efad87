from __future__ import annotations

import numpy as np

from ..errors import DegenerateBoundary, DegenerateIntersection
from ..value_object import FloatArray, ValueObject
from .polytope import ConvexPolytope

_PLANE_TOL = 1e-9


class BoundaryRing(ValueObject):
    """
    A closed loop over the boundary of a 2D intersection, parameterized by arc length: `lam[k]` is the parameter of
    `points[k]` and the loop returns to `points[0]` at 1. A segment intersection yields a two-point loop that runs
    out and back.
    """

    points: FloatArray
    lam: FloatArray
    perimeter: float

    def at(self, lam: float) -> np.ndarray:
        return self.points_at(np.array([lam]))[0]

    def points_at(self, lams: np.ndarray) -> np.ndarray:
        lams = np.mod(np.asarray(lams, dtype=np.float64), 1.0)
        closed = np.vstack([self.points, self.points[:1]])
        knots = np.concatenate([self.lam, [1.0]])
        segment = np.clip(np.searchsorted(knots, lams, side="right") - 1, 0, len(self.points) - 1)
        span = knots[segment + 1] - knots[segment]
        local = np.where(span > 0, (lams - knots[segment]) / np.where(span > 0, span, 1.0), 0.0)
        return closed[segment] + local[:, None] * (closed[segment + 1] - closed[segment])


class Facet(ValueObject):
    """
    One planar face of a 3D intersection: an ordered convex polygon with its unit normal and plane offset
    (normal . x = offset).
    """

    points: FloatArray
    normal: FloatArray
    offset: float

    def plane_basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Origin (first vertex) and two orthonormal in-plane axes, the first along the first polygon edge."""

        origin = self.points[0]
        first = self.points[1] - origin
        first = first / np.linalg.norm(first)
        second = np.cross(self.normal, first)
        return origin, first, second / np.linalg.norm(second)


def _start_index(points: np.ndarray) -> int:
    # Lexicographic minimum on (y, x)
    return int(np.lexsort((points[:, 0], points[:, 1]))[0])


def boundary_ring_2d(polytope: ConvexPolytope) -> BoundaryRing:
    """
    Counterclockwise vertex loop of a 2D intersection starting at its lowest (then leftmost) vertex, with cumulative
    arc-length breakpoints in [0, 1).

    Raises:
        DegenerateBoundary: The intersection is a single point.
        DegenerateIntersection: The intersection is empty or not 2D.
    """

    if polytope.dim != 2:
        raise DegenerateIntersection("boundary rings are defined for 2D polytopes")
    vertices = polytope.vertices
    if polytope.empty or vertices.shape[0] == 0:
        raise DegenerateIntersection("the intersection is empty")
    dimension = polytope.affine_dimension()
    if dimension == 0:
        raise DegenerateBoundary(f"the intersection is the single point {vertices[0].tolist()}")
    if dimension == 1:
        order = np.lexsort((vertices[:, 0], vertices[:, 1]))
        loop = vertices[[order[0], order[-1]]]
    else:
        centroid = vertices.mean(axis=0)
        angles = np.arctan2(vertices[:, 1] - centroid[1], vertices[:, 0] - centroid[0])
        loop = vertices[np.argsort(angles)]
        loop = np.roll(loop, -_start_index(loop), axis=0)
    lengths = np.linalg.norm(np.roll(loop, -1, axis=0) - loop, axis=1)
    perimeter = float(lengths.sum())
    lam = np.concatenate([[0.0], np.cumsum(lengths)[:-1]]) / perimeter
    return BoundaryRing(points=loop, lam=lam, perimeter=perimeter)


def facets_3d(polytope: ConvexPolytope) -> list[Facet]:
    """
    One polygon per non-redundant face of a 3D intersection. A flat (2D) intersection yields a single facet.

    Raises:
        DegenerateIntersection: The intersection is empty, or has affine dimension below 2.
    """

    if polytope.dim != 3:
        raise DegenerateIntersection("facets are defined for 3D polytopes")
    vertices = polytope.vertices
    if polytope.empty or vertices.shape[0] == 0:
        raise DegenerateIntersection("the intersection is empty")
    if polytope.affine_dimension() < 2:
        raise DegenerateIntersection("the intersection has no planar face")

    seen: set[tuple[int, ...]] = set()
    facets: list[Facet] = []
    residuals = vertices @ polytope.A.T - polytope.b
    for row in range(polytope.n_rows):
        on_plane = np.flatnonzero(np.abs(residuals[:, row]) <= _PLANE_TOL * (1.0 + abs(polytope.b[row])))
        if on_plane.shape[0] < 3:
            continue
        key = tuple(on_plane.tolist())
        if key in seen:
            continue
        points = vertices[on_plane]
        if np.linalg.matrix_rank(points[1:] - points[0], tol=1e-8) < 2:
            continue
        seen.add(key)
        normal = polytope.A[row]
        facets.append(Facet(points=_order_in_plane(points, normal), normal=normal, offset=float(polytope.b[row])))
    return facets


def _order_in_plane(points: np.ndarray, normal: np.ndarray) -> np.ndarray:
    centroid = points.mean(axis=0)
    first = points[0] - centroid
    if np.linalg.norm(first) < 1e-12:
        first = points[1] - centroid
    first = first / np.linalg.norm(first)
    second = np.cross(normal, first)
    rel = points - centroid
    angles = np.arctan2(rel @ second, rel @ first)
    return points[np.argsort(angles)]
