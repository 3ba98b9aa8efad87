from __future__ import annotations

from typing_extensions import Any, Optional

import numpy as np

from ..errors import NonConvexQuad
from ..geometry import ConvexPolytope, contains_points, segment_parameter_interval
from ..settings import resolve_eps


def segments_in_union(
    first: ConvexPolytope, second: ConvexPolytope, starts: Any, ends: Any, eps: Optional[float] = None
) -> np.ndarray:
    """
    Batch union test for segments `starts[k] -> ends[k]` against `first` and `second`.

    A segment passes when both endpoints lie in one polytope, or when its endpoints lie in different polytopes and
    some point of the segment lies in both. Either way the whole segment is inside the union.

    Returns:
        np.ndarray: One bool per segment.
    """

    eps = resolve_eps(eps)
    starts = np.atleast_2d(np.asarray(starts, dtype=np.float64))
    ends = np.atleast_2d(np.asarray(ends, dtype=np.float64))
    start_in = contains_points(first, starts, eps), contains_points(second, starts, eps)
    end_in = contains_points(first, ends, eps), contains_points(second, ends, eps)
    together = (start_in[0] & end_in[0]) | (start_in[1] & end_in[1])
    crossing = (start_in[0] & end_in[1]) | (start_in[1] & end_in[0])
    result = together.copy()
    candidates = np.flatnonzero(crossing & ~together)
    if candidates.shape[0]:
        # Interval of the segment parameter inside the intersection
        A = np.vstack([first.A, second.A])
        b = np.concatenate([first.b, second.b]) + eps
        lo, hi = segment_parameter_interval(A, b, starts[candidates], ends[candidates])
        result[candidates] = lo <= hi
    return result


def check_segment_in_union(
    first: ConvexPolytope, second: ConvexPolytope, start: Any, end: Any, eps: Optional[float] = None
) -> bool:
    return bool(segments_in_union(first, second, [start], [end], eps)[0])


def check_triangle_in_union(
    first: ConvexPolytope, second: ConvexPolytope, triangle: Any, eps: Optional[float] = None
) -> bool:
    """True when all three edges of `triangle` (3 x dim) pass the segment test; the whole triangle is then covered."""

    triangle = np.asarray(triangle, dtype=np.float64)
    return bool(np.all(segments_in_union(first, second, triangle, np.roll(triangle, -1, axis=0), eps)))


def check_quad_in_union(
    first: ConvexPolytope, second: ConvexPolytope, quad: Any, eps: Optional[float] = None
) -> bool:
    """
    True when all four edges of the convex quadrilateral `quad` (4 x dim, cyclic order) pass the segment test.

    Raises:
        NonConvexQuad: The vertices are not a convex planar polygon in cyclic order.
    """

    quad = np.asarray(quad, dtype=np.float64)
    _check_convex_quad(quad)
    return bool(np.all(segments_in_union(first, second, quad, np.roll(quad, -1, axis=0), eps)))


def _check_convex_quad(quad: np.ndarray) -> None:
    if quad.shape[0] != 4:
        raise NonConvexQuad(f"a quadrilateral needs 4 vertices, got {quad.shape[0]}")
    points = np.hstack([quad, np.zeros((4, 1))]) if quad.shape[1] == 2 else quad
    normal = np.cross(points[2] - points[0], points[3] - points[1])
    scale = max(float(np.abs(points).max()), 1.0)
    if np.linalg.norm(normal) <= 1e-12 * scale**2:
        raise NonConvexQuad("the quadrilateral is degenerate")
    if np.abs((points - points[0]) @ normal).max() > 1e-9 * scale * np.linalg.norm(normal):
        raise NonConvexQuad("the quadrilateral is not planar")
    edges = np.roll(points, -1, axis=0) - points
    turns = np.cross(edges, np.roll(edges, -1, axis=0)) @ normal
    if not (np.all(turns > 0.0) or np.all(turns < 0.0)):
        raise NonConvexQuad("the vertices are not in convex cyclic order")
