from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing_extensions import Optional

import numpy as np
from pydantic import Field

from ..decompose import CoarseGraph
from ..densegraph import ConfigPatch, DenseGraph, PatchId, TraversalProblem, TraversalStatus, verify_traversal
from ..eda import MessageBus, QueryAttached
from ..encode import segments_in_union
from ..errors import Disconnected, InvalidQuery
from ..geometry import Configuration, posed_points
from ..settings import get_settings, resolve_eps
from ..value_object import ValueObject

logger = logging.getLogger(__name__)


class QueryParams(ValueObject):
    k: int = Field(default=8, ge=1)
    "Stop attaching a query once this many patches are reached."

    waypoints: int = Field(default=0, ge=0)
    retry: bool = True

    rotation_cost: Optional[float] = Field(default=None, ge=0.0)
    "Price of one rotation step inside a patch; (2 pi / n_r) times the object radius when unset."


class Attachment(ValueObject):
    """A certified motion from a query configuration to a configuration of `patch`."""

    patch: PatchId
    waypoints: tuple[Configuration, ...]
    cost: float

    @property
    def config(self) -> Configuration:
        return self.waypoints[-1]


def query_contexts(
    coarse: CoarseGraph, dense: DenseGraph, q: Configuration, eps: Optional[float] = None
) -> list[tuple[int, int]]:
    """
    Polytopes holding the object posed at `q`: `(k, k)` for each polytope containing it alone, then `(i, j)` for each
    coarse edge whose union contains it while neither polytope does.

    Raises:
        InvalidQuery: `q` has the wrong dimension or rotation index.
    """

    obj, table = dense.obj, dense.table
    if q.dim != obj.dim:
        raise InvalidQuery(f"query is {q.dim}D but the object is {obj.dim}D")
    if q.rot_index >= table.n_r:
        raise InvalidQuery(f"rotation index {q.rot_index} outside the table of {table.n_r}")
    posed = posed_points(obj, q.p[None, :], np.array([q.rot_index]), table)[0]
    pairs = obj.static_pairs
    starts, ends = posed[pairs[:, 0]], posed[pairs[:, 1]]

    inside = [bool(segments_in_union(p, p, starts, ends, eps).all()) for p in coarse.polytopes]
    contexts = [(k, k) for k, ok in enumerate(inside) if ok]
    for i, j in coarse.edge_list:
        if inside[i] or inside[j]:
            continue
        if segments_in_union(coarse.polytopes[i], coarse.polytopes[j], starts, ends, eps).all():
            contexts.append((i, j))
    return contexts


def connect_query(
    coarse: CoarseGraph,
    dense: DenseGraph,
    q: Configuration,
    params: QueryParams = QueryParams(),
    role: str = "start",
    eps: Optional[float] = None,
) -> list[Attachment]:
    """
    Attach `q` to the dense graph: certify traversals from `q` to patches on the polytopes holding it, nearest patch
    centroid first, until `params.k` patches are reached.

    Raises:
        InvalidQuery: The object posed at `q` is not inside any polytope or covered polytope pair.
        Disconnected: No patch could be reached.
    """

    eps = resolve_eps(eps)
    contexts = query_contexts(coarse, dense, q, eps)
    if not contexts:
        raise InvalidQuery(f"the {role} configuration is not in the free space covered by the roadmap")

    candidates = []
    for patch in dense.patches:
        context = next((c for c in contexts if set(c) & set(patch.edge)), None)
        if context is not None:
            candidates.append((float(np.linalg.norm(patch.centroid - q.p)), patch, context))
    candidates.sort(key=lambda item: (item[0], item[1].id.i, item[1].id.j, item[1].id.n))

    def attach(item: tuple[float, ConfigPatch, tuple[int, int]]) -> Optional[Attachment]:
        _, patch, context = item
        return _attach_to(coarse, dense, q, patch, context, params, eps)

    attachments: list[Attachment] = []
    batch = max(params.k, get_settings().jobs)
    with ThreadPoolExecutor(max_workers=get_settings().jobs) as pool:
        for first in range(0, len(candidates), batch):
            for found in pool.map(attach, candidates[first : first + batch]):
                if found is not None and len(attachments) < params.k:
                    attachments.append(found)
            if len(attachments) >= params.k:
                break

    MessageBus().publish(QueryAttached(role=role, attachments=len(attachments)))
    if not attachments:
        raise Disconnected(f"the {role} configuration reaches no patch of the dense graph")
    return attachments


def _attach_to(
    coarse: CoarseGraph,
    dense: DenseGraph,
    q: Configuration,
    patch: ConfigPatch,
    context: tuple[int, int],
    params: QueryParams,
    eps: float,
) -> Optional[Attachment]:
    member = patch.index_of(q)
    if member is not None:
        return Attachment(patch=patch.id, waypoints=(q, patch.configs[member]), cost=0.0)

    polytopes = tuple(sorted({*context, *patch.edge}))
    problem = TraversalProblem(
        source=PatchId(i=context[0], j=context[1], n=-1),
        target=patch.id,
        context=polytopes,
        regions=tuple(coarse.polytopes[k] for k in polytopes),
        waypoints=params.waypoints,
        sources=(q,),
        targets=patch.configs,
    )
    build = dense.params
    result = verify_traversal(problem, dense.obj, dense.table, coarse.scene, build, eps)
    if result.status is TraversalStatus.INFEASIBLE and params.retry:
        result = verify_traversal(
            problem.with_waypoints(params.waypoints + 1), dense.obj, dense.table, coarse.scene, build, eps
        )
    if not result.certified:
        logger.debug("no attachment to patch %s (%s)", patch.id, result.status.value)
        return None
    return Attachment(patch=patch.id, waypoints=result.waypoints, cost=result.cost)
