from __future__ import annotations

import math
from functools import cached_property
from typing_extensions import Annotated, Optional

import networkx as nx
import numpy as np
from pydantic import Field, model_validator

from ..encode import segments_in_union
from ..entity import ImmutableEntity
from ..geometry import Configuration, ConvexPolytope, RigidObject, contains_points, posed_points
from ..settings import resolve_eps
from ..value_object import IntArray, ValueObject
from .grid import BoundaryGrid


class PatchId(ValueObject):
    """Patch `n` on the boundary of the intersection of polytopes `i` and `j`."""

    i: int
    j: int
    n: int

    def __str__(self) -> str:
        return f"{self.i}-{self.j}-{self.n}"


class ConfigPatch(ImmutableEntity):
    """
    A connected group of free configurations on one intersection boundary. `adjacency` holds index pairs into
    `configs`; every adjacent pair is a motion known to stay inside the union of the edge's polytopes.
    """

    id: Annotated[PatchId, ImmutableEntity.IdField]
    configs: tuple[Configuration, ...]
    adjacency: IntArray = Field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))

    @model_validator(mode="after")
    def _check_connected(self) -> ConfigPatch:
        if not self.configs:
            raise ValueError("a patch needs at least one configuration")
        if not nx.is_connected(self._graph(np.ones(len(self.adjacency.reshape(-1, 2))))):
            raise ValueError(f"patch {self.id} is not connected")
        return self

    @property
    def edge(self) -> tuple[int, int]:
        return (self.id.i, self.id.j)

    @property
    def size(self) -> int:
        return len(self.configs)

    @cached_property
    def positions(self) -> np.ndarray:
        return np.array([q.p for q in self.configs])

    @cached_property
    def rotations(self) -> np.ndarray:
        return np.array([q.rot_index for q in self.configs], dtype=np.int64)

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.positions.mean(axis=0)

    def index_of(self, q: Configuration, tol: float = 1e-9) -> Optional[int]:
        matches = np.flatnonzero(
            (self.rotations == q.rot_index) & (np.abs(self.positions - q.p).max(axis=1) <= tol)
        )
        return int(matches[0]) if matches.shape[0] else None

    def graph(self, rotation_cost: float) -> nx.Graph:
        """The intra-patch graph weighted by translation 1-norm, or `rotation_cost` for a rotation step."""

        pairs = self.adjacency.reshape(-1, 2)
        weights = np.where(
            self.rotations[pairs[:, 0]] != self.rotations[pairs[:, 1]],
            rotation_cost,
            np.abs(self.positions[pairs[:, 0]] - self.positions[pairs[:, 1]]).sum(axis=1),
        )
        return self._graph(weights)

    def _graph(self, weights: np.ndarray) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.configs)))
        for (a, b), weight in zip(self.adjacency.reshape(-1, 2), weights):
            graph.add_edge(int(a), int(b), weight=float(weight))
        return graph


def free_configurations(
    grid: BoundaryGrid,
    obj: RigidObject,
    first: ConvexPolytope,
    second: ConvexPolytope,
    eps: Optional[float] = None,
) -> np.ndarray:
    """
    Free-configuration mask over the grid, shape (n_sites, n_r): the object's edges and center-to-vertex segments
    at that pose all pass the union test against `first` and `second`.
    """

    sites = np.repeat(np.arange(grid.n_sites), grid.n_r)
    rotations = np.tile(np.arange(grid.n_r), grid.n_sites)
    return _static_free(grid.sites[sites], rotations, grid, obj, first, second, eps).reshape(grid.n_sites, grid.n_r)


def _static_free(
    positions: np.ndarray,
    rotations: np.ndarray,
    grid: BoundaryGrid,
    obj: RigidObject,
    first: ConvexPolytope,
    second: ConvexPolytope,
    eps: Optional[float],
) -> np.ndarray:
    if positions.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    posed = posed_points(obj, positions, rotations, grid.table)
    pairs = obj.static_pairs
    starts = posed[:, pairs[:, 0]].reshape(-1, obj.dim)
    ends = posed[:, pairs[:, 1]].reshape(-1, obj.dim)
    passed = segments_in_union(first, second, starts, ends, eps)
    return passed.reshape(positions.shape[0], pairs.shape[0]).all(axis=1)


def bloat_distance(grid: BoundaryGrid, obj: RigidObject) -> float:
    """Largest distance a point of the object moves in one grid step: max(site spacing, rotation chord)."""

    chord = 2.0 * obj.max_radius * math.sin(math.pi / grid.n_r) if grid.n_r > 1 else 0.0
    return max(grid.spacing, chord)


def group_patches(
    free: np.ndarray,
    grid: BoundaryGrid,
    obj: RigidObject,
    first: ConvexPolytope,
    second: ConvexPolytope,
    eps: Optional[float] = None,
) -> list[ConfigPatch]:
    """
    Group free grid configurations into connected patches.

    In 2D two neighbouring configurations (next site on the ring, or next rotation) are linked when one of them
    stays free with every face of both polytopes pushed in by the bloat distance. In 3D rotations at one site are
    linked when a ball of the object's radius at the site fits in one polytope, and neighbouring sites of one facet
    at the same rotation are always linked.
    """

    eps = resolve_eps(eps)
    n_r = grid.n_r
    free_flat = free.reshape(-1)
    free_ids = np.flatnonzero(free_flat)
    if free_ids.shape[0] == 0:
        return []

    if grid.table.dim == 2:
        delta = bloat_distance(grid, obj)
        robust = free_flat & _bloated_free(grid, obj, first.shrink(delta), second.shrink(delta), eps)
        ball_ok = None
    else:
        robust = None
        radius = obj.max_radius
        ball_ok = contains_points(first.shrink(radius), grid.sites, eps) | contains_points(
            second.shrink(radius), grid.sites, eps
        )

    graph = nx.Graph()
    graph.add_nodes_from(int(c) for c in free_ids)
    for config in free_ids:
        site, rotation = divmod(int(config), n_r)
        for other in _rotation_neighbours(grid, rotation):
            neighbour = site * n_r + other
            if neighbour > config and free_flat[neighbour]:
                if robust is not None and not (robust[config] or robust[neighbour]):
                    continue
                if ball_ok is not None and not ball_ok[site]:
                    continue
                graph.add_edge(int(config), neighbour)
        for other_site in grid.site_neighbours(site):
            neighbour = other_site * n_r + rotation
            if neighbour > config and free_flat[neighbour]:
                if robust is not None and not (robust[config] or robust[neighbour]):
                    continue
                graph.add_edge(int(config), neighbour)

    components = sorted((sorted(component) for component in nx.connected_components(graph)), key=lambda c: c[0])
    patches = []
    for n, members in enumerate(components):
        local = {config: k for k, config in enumerate(members)}
        pairs = sorted(tuple(sorted((local[a], local[b]))) for a, b in graph.edges(members))
        patches.append(
            ConfigPatch(
                id=PatchId(i=grid.edge[0], j=grid.edge[1], n=n),
                configs=tuple(grid.configuration(config) for config in members),
                adjacency=np.array(pairs, dtype=np.int64).reshape(-1, 2),
            )
        )
    return patches


def _rotation_neighbours(grid: BoundaryGrid, rotation: int) -> list[int]:
    if grid.table.dim == 2:
        if grid.n_r == 1:
            return []
        return sorted({(rotation - 1) % grid.n_r, (rotation + 1) % grid.n_r} - {rotation})
    return grid.table.neighbours(rotation)


def _bloated_free(
    grid: BoundaryGrid, obj: RigidObject, first: ConvexPolytope, second: ConvexPolytope, eps: float
) -> np.ndarray:
    sites = np.repeat(np.arange(grid.n_sites), grid.n_r)
    rotations = np.tile(np.arange(grid.n_r), grid.n_sites)
    return _static_free(grid.sites[sites], rotations, grid, obj, first, second, eps)
