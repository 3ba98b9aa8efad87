from __future__ import annotations

import logging
from functools import cached_property
from itertools import combinations
from typing_extensions import Optional, Sequence

import networkx as nx
import numpy as np
from pydantic import Field, model_validator

from ..geometry import ConvexPolytope, Scene, contains_point, intersect
from ..value_object import IntArray, ValueObject

logger = logging.getLogger(__name__)


class CoarseGraph(ValueObject):
    """
    The free-space cover: polytopes as vertices, overlapping pairs as edges, with each edge's intersection cached.
    `edges[k] = (i, j)` with i < j, sorted, and `intersections[k]` is P_i ∩ P_j.
    """

    scene: Scene
    polytopes: tuple[ConvexPolytope, ...] = ()
    edges: IntArray = Field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))
    intersections: tuple[ConvexPolytope, ...] = ()
    coverage: float = 0.0
    iterations: int = 0

    @model_validator(mode="after")
    def _check_edges(self) -> CoarseGraph:
        if self.edges.reshape(-1, 2).shape[0] != len(self.intersections):
            raise ValueError("every coarse edge needs exactly one cached intersection")
        return self

    @property
    def n_polytopes(self) -> int:
        return len(self.polytopes)

    @property
    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in self.edges.reshape(-1, 2)]

    @cached_property
    def _edge_index(self) -> dict[tuple[int, int], int]:
        return {edge: k for k, edge in enumerate(self.edge_list)}

    def intersection(self, i: int, j: int) -> ConvexPolytope:
        return self.intersections[self._edge_index[(min(i, j), max(i, j))]]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edge_index

    def neighbours(self, index: int) -> list[int]:
        return sorted(j if i == index else i for i, j in self.edge_list if index in (i, j))

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_polytopes))
        graph.add_edges_from(self.edge_list)
        return graph

    def containing(self, point: np.ndarray, eps: Optional[float] = None) -> list[int]:
        return [k for k, polytope in enumerate(self.polytopes) if contains_point(polytope, point, eps)]


def construct_coarse_graph(
    polytopes: Sequence[ConvexPolytope],
    scene: Scene,
    eps: Optional[float] = None,
    coverage: float = 0.0,
    iterations: int = 0,
) -> CoarseGraph:
    """Test every polytope pair for overlap and cache the nonempty intersections (touching pairs included)."""

    edges = []
    intersections = []
    for i, j in combinations(range(len(polytopes)), 2):
        overlap = intersect(polytopes[i], polytopes[j], eps)
        if overlap.empty or overlap.vertices.shape[0] == 0:
            continue
        edges.append((i, j))
        intersections.append(overlap)
    logger.debug("coarse graph: %d polytopes, %d edges", len(polytopes), len(edges))
    return CoarseGraph(
        scene=scene,
        polytopes=tuple(polytopes),
        edges=np.array(edges, dtype=np.int64).reshape(-1, 2),
        intersections=tuple(intersections),
        coverage=coverage,
        iterations=iterations,
    )
