from __future__ import annotations

import logging
import math
from typing_extensions import Optional

import numpy as np
from pydantic import Field

from ..errors import DegenerateBoundary, DegenerateIntersection
from ..geometry import (
    Configuration,
    ConvexPolytope,
    RigidObject,
    RotationTable,
    boundary_ring_2d,
    contains_points,
    facets_3d,
)
from ..value_object import FloatArray, IntArray, ValueObject

logger = logging.getLogger(__name__)

DEFAULT_SITES = 60
_ON_BOUNDARY = 1e-9


class BoundaryGrid(ValueObject):
    """
    Translation sites on the boundary of one coarse-edge intersection, each combined with every rotation of
    `table`. Configuration `c` is site `c // n_r` with rotation `c % n_r`.

    In 2D the sites walk the boundary ring at equal arc-length steps and the ring wraps. In 3D every facet carries
    its own rectangular grid; `facet[s]` and `cell[s]` give the facet and the (row, column) of site `s`.
    """

    edge: tuple[int, int]
    sites: FloatArray
    facet: IntArray
    cell: IntArray
    table: RotationTable
    wraps: bool = False
    spacing: float = Field(default=0.0, ge=0.0)
    "Distance between neighbouring sites (arc length in 2D, grid step in 3D)."

    @property
    def n_sites(self) -> int:
        return int(self.sites.shape[0])

    @property
    def n_r(self) -> int:
        return self.table.n_r

    @property
    def n_configs(self) -> int:
        return self.n_sites * self.n_r

    def configuration(self, index: int) -> Configuration:
        site, rotation = divmod(int(index), self.n_r)
        return Configuration(p=self.sites[site], rot_index=rotation)

    def site_neighbours(self, site: int) -> list[int]:
        """Translation neighbours: ring predecessor and successor in 2D, 4-neighbourhood within the facet in 3D."""

        n = self.n_sites
        if self.table.dim == 2:
            if n == 1:
                return []
            if self.wraps:
                return sorted({(site - 1) % n, (site + 1) % n} - {site})
            return [s for s in (site - 1, site + 1) if 0 <= s < n]
        same = np.flatnonzero(self.facet == self.facet[site])
        steps = np.abs(self.cell[same] - self.cell[site]).sum(axis=1)
        return [int(s) for s in same[steps == 1]]


def discretize_boundary(
    intersection: ConvexPolytope,
    edge: tuple[int, int],
    obj: RigidObject,
    table: RotationTable,
    n_t: int = DEFAULT_SITES,
    h: Optional[float] = None,
) -> BoundaryGrid:
    """
    Place translation sites on the boundary of `intersection`: `n_t` equally spaced ring points in 2D, or a grid
    of spacing `h` (default: the object's smallest bounding-box side) on every facet in 3D. A point intersection
    yields a single site.
    """

    if intersection.dim == 2:
        return _ring_grid(intersection, edge, table, n_t)
    if h is None:
        extent = obj.vertices.max(axis=0) - obj.vertices.min(axis=0)
        positive = extent[extent > 1e-12]
        h = float(positive.min()) if positive.size else 1.0
    return _facet_grid(intersection, edge, table, h)


def _ring_grid(intersection: ConvexPolytope, edge: tuple[int, int], table: RotationTable, n_t: int) -> BoundaryGrid:
    try:
        ring = boundary_ring_2d(intersection)
    except DegenerateBoundary:
        point = intersection.vertices[:1]
        logger.debug("intersection %s is a single point", edge)
        return BoundaryGrid(
            edge=edge, sites=point, facet=np.zeros(1), cell=np.zeros((1, 2)), table=table, wraps=False
        )
    sites = ring.points_at(np.arange(n_t) / n_t)
    cells = np.column_stack([np.arange(n_t), np.zeros(n_t)])
    return BoundaryGrid(
        edge=edge,
        sites=sites,
        facet=np.zeros(n_t),
        cell=cells,
        table=table,
        wraps=True,
        spacing=ring.perimeter / n_t,
    )


def _facet_grid(intersection: ConvexPolytope, edge: tuple[int, int], table: RotationTable, h: float) -> BoundaryGrid:
    dimension = intersection.affine_dimension()
    if dimension < 0:
        raise DegenerateIntersection(f"intersection {edge} is empty")
    if dimension == 0:
        return BoundaryGrid(
            edge=edge, sites=intersection.vertices[:1], facet=np.zeros(1), cell=np.zeros((1, 2)), table=table
        )
    if dimension == 1:
        vertices = intersection.vertices
        order = np.lexsort(vertices.T[::-1])
        start, end = vertices[order[0]], vertices[order[-1]]
        count = int(math.floor(np.linalg.norm(end - start) / h + 1e-9)) + 1
        steps = np.arange(count)[:, None] * h * (end - start) / np.linalg.norm(end - start)
        cells = np.column_stack([np.arange(count), np.zeros(count)])
        return BoundaryGrid(
            edge=edge, sites=start + steps, facet=np.zeros(count), cell=cells, table=table, spacing=h
        )

    sites, facet_ids, cells = [], [], []
    for index, facet in enumerate(facets_3d(intersection)):
        origin, first, second = facet.plane_basis()
        local = np.column_stack([(facet.points - origin) @ first, (facet.points - origin) @ second])
        lo, hi = local.min(axis=0), local.max(axis=0)
        counts = np.floor((hi - lo) / h + 1e-9).astype(int) + 1
        rows, cols = np.meshgrid(np.arange(counts[0]), np.arange(counts[1]), indexing="ij")
        grid_cells = np.column_stack([rows.ravel(), cols.ravel()])
        uv = lo + grid_cells * h
        points = origin + uv[:, :1] * first + uv[:, 1:] * second
        inside = contains_points(intersection, points, _ON_BOUNDARY)
        sites.append(points[inside])
        cells.append(grid_cells[inside])
        facet_ids.append(np.full(int(inside.sum()), index))
    return BoundaryGrid(
        edge=edge,
        sites=np.vstack(sites),
        facet=np.concatenate(facet_ids),
        cell=np.vstack(cells),
        table=table,
        spacing=h,
    )
