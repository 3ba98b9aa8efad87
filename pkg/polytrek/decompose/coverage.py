from __future__ import annotations

from typing_extensions import Iterable, Optional

import numpy as np

from ..errors import NoUncoveredEdges
from ..geometry import ConvexPolytope, contains_points
from ..settings import resolve_eps
from .visibility import VisibilityGraph

INTERVALS_PER_EDGE = 100


class CoverageTracker:
    """
    Length-weighted coverage of the visibility edges by a growing set of polytopes. Each edge is cut into
    `intervals` equal pieces; a piece counts as covered once its midpoint lies in some polytope.

    A graph without edges has nothing to cover and reports full coverage.
    """

    def __init__(self, graph: VisibilityGraph, intervals: int = INTERVALS_PER_EDGE, eps: Optional[float] = None):
        self.graph = graph
        self.eps = resolve_eps(eps)
        self.polytopes: list[ConvexPolytope] = []
        starts, ends = graph.segments()
        fractions = (np.arange(intervals) + 0.5) / intervals
        self._starts = starts
        self._directions = ends - starts
        self._midpoints = starts[:, None, :] + fractions[None, :, None] * self._directions[:, None, :]
        self._weights = np.repeat((graph.lengths() / intervals)[:, None], intervals, axis=1)
        self._total = float(self._weights.sum())
        self._covered = np.zeros(self._weights.shape, dtype=bool)
        self._intervals = intervals

    @property
    def coverage(self) -> float:
        if self._total <= 0.0:
            return 1.0
        return float(self._weights[self._covered].sum() / self._total)

    def add(self, polytope: ConvexPolytope) -> None:
        self.polytopes.append(polytope)
        if self._midpoints.size:
            self._covered |= contains_points(polytope, self._midpoints, self.eps)

    def extend(self, polytopes: Iterable[ConvexPolytope]) -> None:
        for polytope in polytopes:
            self.add(polytope)

    def sample(self, n_s: int, rng: np.random.Generator) -> np.ndarray:
        """
        `n_s` points on uncovered edge pieces, pieces drawn with probability proportional to their length and points
        uniform within a piece. A draw that falls inside a polytope is redrawn; after repeated misses the piece's
        midpoint, which is uncovered, is used.

        Raises:
            NoUncoveredEdges: Every edge piece is covered.
        """

        edge_index, piece_index = np.nonzero(~self._covered & (self._weights > 0.0))
        if edge_index.shape[0] == 0:
            raise NoUncoveredEdges("every visibility edge is covered")
        weights = self._weights[edge_index, piece_index]
        probabilities = weights / weights.sum()
        seeds = []
        for _ in range(n_s):
            choice = int(rng.choice(edge_index.shape[0], p=probabilities))
            edge, piece = edge_index[choice], piece_index[choice]
            point = self._midpoints[edge, piece]
            for _ in range(20):
                fraction = (piece + rng.uniform()) / self._intervals
                candidate = self._starts[edge] + fraction * self._directions[edge]
                if not self._inside_any(candidate):
                    point = candidate
                    break
            seeds.append(point)
        return np.array(seeds).reshape(-1, self.graph.points.shape[1])

    def _inside_any(self, point: np.ndarray) -> bool:
        return any(contains_points(polytope, point[None, :], self.eps)[0] for polytope in self.polytopes)


def check_coverage(
    graph: VisibilityGraph, polytopes: Iterable[ConvexPolytope], eps: Optional[float] = None
) -> float:
    """Fraction of total visibility-edge length inside the union of `polytopes`, in [0, 1]."""

    tracker = CoverageTracker(graph, eps=eps)
    tracker.extend(polytopes)
    return tracker.coverage


def sample_visibility_edge(
    graph: VisibilityGraph, polytopes: Iterable[ConvexPolytope], n_s: int, seed: int = 0, eps: Optional[float] = None
) -> np.ndarray:
    """
    Draw `n_s` seed points from the uncovered portions of the visibility edges.

    Raises:
        NoUncoveredEdges: The polytopes cover every edge.
    """

    tracker = CoverageTracker(graph, eps=eps)
    tracker.extend(polytopes)
    return tracker.sample(n_s, np.random.default_rng(seed))
