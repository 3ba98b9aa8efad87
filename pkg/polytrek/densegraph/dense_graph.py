from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property
from typing_extensions import Optional

import networkx as nx
import numpy as np
from pydantic import model_validator

from ..decompose import CoarseGraph
from ..eda import (
    DenseGraphBuilt,
    MessageBus,
    PatchesGrouped,
    TraversalCertified,
    TraversalInfeasible,
    TraversalUnverified,
)
from ..errors import DegenerateIntersection
from ..geometry import Configuration, ObjectFingerprint, RigidObject, RotationTable
from ..settings import get_settings, resolve_eps
from ..value_object import ValueObject
from .grid import discretize_boundary
from .patches import ConfigPatch, PatchId, free_configurations, group_patches
from .traversal import BuildParams, TraversalProblem, TraversalResult, TraversalStatus, verify_traversal

logger = logging.getLogger(__name__)

PatchPair = tuple[PatchId, PatchId]


class TraversalEdge(ValueObject):
    """A certified motion from a configuration of `source` to one of `target`, valid in reverse as well."""

    source: PatchId
    target: PatchId
    waypoints: tuple[Configuration, ...]
    cost: float
    context: tuple[int, ...] = ()
    fast_path: bool = False
    status: TraversalStatus = TraversalStatus.CERTIFIED

    @model_validator(mode="after")
    def _check_edge(self) -> TraversalEdge:
        if self.status is not TraversalStatus.CERTIFIED:
            raise ValueError("only certified traversals become dense-graph edges")
        if len(self.waypoints) < 2:
            raise ValueError("a traversal has at least its two end configurations")
        return self

    def oriented(self, source: PatchId) -> tuple[Configuration, ...]:
        """Waypoints read starting from patch `source`."""

        return self.waypoints if source == self.source else tuple(reversed(self.waypoints))


class BuildStats(ValueObject):
    patches: int = 0
    problems: int = 0
    "Traversal problems posed, retries included."

    milp_solves: int = 0
    fast_path: int = 0
    pruned: int = 0
    certified: int = 0
    infeasible: int = 0
    unverified: int = 0


class DenseGraph(ValueObject):
    """
    Configuration patches of one object on the coarse-graph intersections, joined by certified traversals.
    Candidate pairs that were shown infeasible, or ran out of budget, are kept so a later build can resume.
    """

    obj: RigidObject
    table: RotationTable
    patches: tuple[ConfigPatch, ...] = ()
    edges: tuple[TraversalEdge, ...] = ()
    infeasible: tuple[PatchPair, ...] = ()
    unverified: tuple[PatchPair, ...] = ()
    params: BuildParams = BuildParams()
    stats: BuildStats = BuildStats()

    @property
    def fingerprint(self) -> ObjectFingerprint:
        return self.obj.fingerprint()

    @property
    def n_patches(self) -> int:
        return len(self.patches)

    @cached_property
    def _patch_index(self) -> dict[PatchId, ConfigPatch]:
        return {patch.id: patch for patch in self.patches}

    @cached_property
    def _edge_index(self) -> dict[PatchPair, TraversalEdge]:
        index = {}
        for edge in self.edges:
            index[(edge.source, edge.target)] = edge
            index[(edge.target, edge.source)] = edge
        return index

    def patch(self, patch_id: PatchId) -> ConfigPatch:
        return self._patch_index[patch_id]

    def edge(self, source: PatchId, target: PatchId) -> Optional[TraversalEdge]:
        return self._edge_index.get((source, target))

    def patches_on(self, polytope: int) -> list[ConfigPatch]:
        return [patch for patch in self.patches if polytope in patch.edge]

    def graph(self) -> nx.Graph:
        """Patch ids as nodes, certified traversals as edges weighted by their translation cost."""

        graph = nx.Graph()
        graph.add_nodes_from(patch.id for patch in self.patches)
        for edge in self.edges:
            graph.add_edge(edge.source, edge.target, weight=edge.cost)
        return graph


def candidate_pairs(patches: tuple[ConfigPatch, ...]) -> list[PatchPair]:
    """Unordered pairs of distinct patches whose intersections share a polytope, in patch order."""

    pairs = []
    for a, u in enumerate(patches):
        for w in patches[a + 1 :]:
            if set(u.edge) & set(w.edge):
                pairs.append((u.id, w.id))
    return pairs


def build_patches(
    coarse: CoarseGraph, obj: RigidObject, table: RotationTable, params: BuildParams, eps: Optional[float] = None
) -> tuple[ConfigPatch, ...]:
    """Discretize every coarse-edge intersection boundary and group its free configurations, one job per edge."""

    eps = resolve_eps(eps)
    bus = MessageBus()

    def patches_of(k: int) -> tuple[int, list[ConfigPatch]]:
        i, j = coarse.edge_list[k]
        try:
            grid = discretize_boundary(coarse.intersections[k], (i, j), obj, table, params.n_t, params.h)
        except DegenerateIntersection as error:
            logger.warning("intersection %d-%d skipped: %s", i, j, error)
            return 0, []
        free = free_configurations(grid, obj, coarse.polytopes[i], coarse.polytopes[j], eps)
        return int(free.sum()), group_patches(free, grid, obj, coarse.polytopes[i], coarse.polytopes[j], eps)

    with ThreadPoolExecutor(max_workers=get_settings().jobs) as pool:
        grouped = list(pool.map(patches_of, range(len(coarse.intersections))))

    patches: list[ConfigPatch] = []
    for edge, (free_count, found) in zip(coarse.edge_list, grouped):
        bus.publish(PatchesGrouped(edge=edge, free_configs=free_count, patches=len(found)))
        patches.extend(found)
    return tuple(patches)


def build_dense_graph(
    coarse: CoarseGraph,
    obj: RigidObject,
    params: BuildParams = BuildParams(),
    previous: Optional[DenseGraph] = None,
    eps: Optional[float] = None,
) -> DenseGraph:
    """
    Build the dense graph of `obj` over `coarse`: patches on every intersection boundary, then a traversal check for
    every pair of patches sharing a polytope, retried once with one more waypoint when infeasible and
    `params.retry` is set.

    With `previous` (a graph of the same object over the same coarse graph) its patches, certified edges and
    infeasible pairs are kept, and only its unverified pairs are checked again.
    """

    eps = resolve_eps(eps)
    bus = MessageBus()
    if previous is not None and previous.obj != obj:
        raise ValueError("a dense graph can only resume from a graph of the same object")
    if previous is not None:
        table, patches = previous.table, previous.patches
        logger.info("resuming dense graph: %d unverified pairs to retry", len(previous.unverified))
    else:
        n_r = params.n_r or RotationTable.default_count(obj.dim)
        table = RotationTable.for_dimension(obj.dim, n_r)
        patches = build_patches(coarse, obj, table, params, eps)

    index = {patch.id: patch for patch in patches}
    pairs = candidate_pairs(patches)
    if previous is not None:
        retry = set(previous.unverified)
        pairs = [pair for pair in pairs if pair in retry]

    def certify(pair: PatchPair) -> list[TraversalResult]:
        problem = TraversalProblem.between(index[pair[0]], index[pair[1]], coarse.polytopes, params.waypoints)
        results = [verify_traversal(problem, obj, table, coarse.scene, params, eps)]
        if results[-1].status is TraversalStatus.INFEASIBLE and params.retry:
            retried = problem.with_waypoints(params.waypoints + 1)
            results.append(verify_traversal(retried, obj, table, coarse.scene, params, eps))
        return results

    with ThreadPoolExecutor(max_workers=get_settings().jobs) as pool:
        outcomes = list(pool.map(certify, pairs))

    edges = list(previous.edges) if previous is not None else []
    infeasible = list(previous.infeasible) if previous is not None else []
    unverified: list[PatchPair] = []
    counts = dict(problems=0, milp_solves=0, fast_path=0, pruned=0)
    for (source, target), results in zip(pairs, outcomes):
        counts["problems"] += len(results)
        counts["milp_solves"] += sum(1 for r in results if not r.fast_path and not r.pruned)
        counts["fast_path"] += sum(1 for r in results if r.fast_path)
        counts["pruned"] += sum(1 for r in results if r.pruned)
        result = results[-1]
        if result.certified:
            context = tuple(sorted({*index[source].edge, *index[target].edge}))
            edges.append(
                TraversalEdge(
                    source=source,
                    target=target,
                    waypoints=result.waypoints,
                    cost=result.cost,
                    context=context,
                    fast_path=result.fast_path,
                )
            )
            bus.publish(
                TraversalCertified(
                    source=str(source),
                    target=str(target),
                    waypoints=len(result.waypoints) - 2,
                    cost=result.cost,
                    fast_path=result.fast_path,
                )
            )
        elif result.status is TraversalStatus.INFEASIBLE:
            infeasible.append((source, target))
            bus.publish(TraversalInfeasible(source=str(source), target=str(target), pruned=result.pruned))
        else:
            unverified.append((source, target))
            bus.publish(TraversalUnverified(source=str(source), target=str(target), nodes=result.nodes))

    order = {pair: k for k, pair in enumerate(candidate_pairs(patches))}
    edges.sort(key=lambda edge: order[(edge.source, edge.target)])
    infeasible.sort(key=order.__getitem__)
    if previous is not None:
        counts = {key: value + getattr(previous.stats, key) for key, value in counts.items()}
    stats = BuildStats(
        patches=len(patches),
        certified=len(edges),
        infeasible=len(infeasible),
        unverified=len(unverified),
        **counts,
    )
    bus.publish(
        DenseGraphBuilt(
            patches=stats.patches,
            problems=stats.problems,
            certified=stats.certified,
            infeasible=stats.infeasible,
            unverified=stats.unverified,
        )
    )
    if not patches:
        logger.warning("no configuration patches: the coarse graph has no usable intersections")
    return DenseGraph(
        obj=obj,
        table=table,
        patches=patches,
        edges=tuple(edges),
        infeasible=tuple(infeasible),
        unverified=tuple(unverified),
        params=params,
        stats=stats,
    )


def free_configuration_count(
    coarse: CoarseGraph, obj: RigidObject, table: RotationTable, params: BuildParams, eps: Optional[float] = None
) -> int:
    """Free grid configurations over all intersections, before any grouping."""

    total = 0
    for k, (i, j) in enumerate(coarse.edge_list):
        try:
            grid = discretize_boundary(coarse.intersections[k], (i, j), obj, table, params.n_t, params.h)
        except DegenerateIntersection:
            continue
        total += int(np.count_nonzero(free_configurations(grid, obj, coarse.polytopes[i], coarse.polytopes[j], eps)))
    return total
