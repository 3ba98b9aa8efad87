from __future__ import annotations

import logging
import math
from typing_extensions import Optional

import networkx as nx
import numpy as np

from ..decompose import CoarseGraph
from ..densegraph import ConfigPatch, DenseGraph, PatchId, TraversalProblem, TraversalStatus, verify_traversal
from ..eda import MessageBus, PlanFound
from ..errors import InvalidQuery, NoPath
from ..geometry import Configuration
from ..motion import MotionKind, MotionPlan, PlanSegment
from ..settings import resolve_eps
from .attach import Attachment, QueryParams, connect_query, query_contexts

logger = logging.getLogger(__name__)

START = "start"
GOAL = "goal"


def rotation_step_cost(dense: DenseGraph, params: QueryParams = QueryParams()) -> float:
    """Price of one intra-patch rotation step: the override, or the arc length of one step at the object radius."""

    if params.rotation_cost is not None:
        return params.rotation_cost
    return 2.0 * math.pi / dense.table.n_r * dense.obj.max_radius


def intra_patch_walk(
    patch: ConfigPatch, entry: Configuration, departure: Configuration, rotation_cost: float
) -> list[Configuration]:
    """Cheapest walk between two configurations of `patch` along its adjacency."""

    source, target = patch.index_of(entry), patch.index_of(departure)
    if source is None or target is None:
        raise ValueError(f"configuration is not part of patch {patch.id}")
    path = nx.dijkstra_path(patch.graph(rotation_cost), source, target)
    return [patch.configs[k] for k in path]


def plan(
    coarse: CoarseGraph,
    dense: DenseGraph,
    q_start: Configuration,
    q_end: Configuration,
    params: QueryParams = QueryParams(),
    eps: Optional[float] = None,
) -> MotionPlan:
    """
    Plan a motion from `q_start` to `q_end`: attach both to the dense graph, find the cheapest chain of certified
    traversals by Dijkstra over the patches, then stitch in the walks inside every patch visited.

    Raises:
        InvalidQuery: A query configuration lies outside the covered free space.
        Disconnected: A query configuration reaches no patch.
        NoPath: The attached patches are not connected.
    """

    eps = resolve_eps(eps)
    bus = MessageBus()
    if q_start.rot_index == q_end.rot_index and np.array_equal(q_start.p, q_end.p):
        if not query_contexts(coarse, dense, q_start, eps):
            raise InvalidQuery("the start configuration is not in the free space covered by the roadmap")
        bus.publish(PlanFound(segments=0, waypoints=0, cost=0.0))
        return MotionPlan()

    starts = connect_query(coarse, dense, q_start, params, START, eps)
    goals = connect_query(coarse, dense, q_end, params, GOAL, eps)
    direct = _direct_motion(coarse, dense, q_start, q_end, params, eps)

    graph = dense.graph()
    graph.add_node(START)
    graph.add_node(GOAL)
    for attachment in starts:
        graph.add_edge(START, attachment.patch, weight=attachment.cost)
    for attachment in goals:
        graph.add_edge(attachment.patch, GOAL, weight=attachment.cost)
    if direct is not None:
        graph.add_edge(START, GOAL, weight=direct.cost)

    try:
        route = nx.dijkstra_path(canonical_graph(graph), START, GOAL)
    except nx.NetworkXNoPath as error:
        raise NoPath("the start and goal attach to disconnected parts of the dense graph") from error

    segments = _stitch(dense, route, starts, goals, direct, rotation_step_cost(dense, params))
    motion = MotionPlan.from_segments(segments)
    bus.publish(PlanFound(segments=len(motion.segments), waypoints=len(motion.waypoints()), cost=motion.cost))
    return motion


def _node_key(node: object) -> tuple:
    if isinstance(node, PatchId):
        return (1, node.i, node.j, node.n)
    return (0,) if node == START else (2,)


def canonical_graph(graph: nx.Graph) -> nx.Graph:
    """
    A copy of `graph` with nodes and edges inserted in a fixed order, so that shortest-path ties resolve the same
    way however the patches and traversals were gathered.
    """

    ordered = nx.Graph()
    ordered.add_nodes_from(sorted(graph.nodes, key=_node_key))
    edges = [tuple(sorted((u, v), key=_node_key)) + (data,) for u, v, data in graph.edges(data=True)]
    ordered.add_edges_from(sorted(edges, key=lambda edge: (_node_key(edge[0]), _node_key(edge[1]))))
    return ordered


def _direct_motion(
    coarse: CoarseGraph,
    dense: DenseGraph,
    q_start: Configuration,
    q_end: Configuration,
    params: QueryParams,
    eps: float,
) -> Optional[Attachment]:
    # Both ends in one polytope (or one covered pair): try the traversal between them directly
    shared = [
        (a, b)
        for a in query_contexts(coarse, dense, q_start, eps)
        for b in query_contexts(coarse, dense, q_end, eps)
        if set(a) & set(b)
    ]
    if not shared:
        return None
    a, b = shared[0]
    polytopes = tuple(sorted({*a, *b}))
    problem = TraversalProblem(
        source=PatchId(i=a[0], j=a[1], n=-1),
        target=PatchId(i=b[0], j=b[1], n=-2),
        context=polytopes,
        regions=tuple(coarse.polytopes[k] for k in polytopes),
        waypoints=params.waypoints,
        sources=(q_start,),
        targets=(q_end,),
    )
    result = verify_traversal(problem, dense.obj, dense.table, coarse.scene, dense.params, eps)
    if result.status is TraversalStatus.INFEASIBLE and params.retry:
        result = verify_traversal(
            problem.with_waypoints(params.waypoints + 1), dense.obj, dense.table, coarse.scene, dense.params, eps
        )
    if not result.certified:
        return None
    return Attachment(patch=problem.target, waypoints=result.waypoints, cost=result.cost)


def _stitch(
    dense: DenseGraph,
    route: list,
    starts: list[Attachment],
    goals: list[Attachment],
    direct: Optional[Attachment],
    rotation_cost: float,
) -> list[PlanSegment]:
    if len(route) == 2:
        return [PlanSegment(kind=MotionKind.INTER_VERTEX, waypoints=direct.waypoints)]

    first = next(a for a in starts if a.patch == route[1])
    last = next(a for a in goals if a.patch == route[-2])
    segments = [PlanSegment(kind=MotionKind.INTER_VERTEX, waypoints=first.waypoints)]
    entry = first.config
    for k, patch_id in enumerate(route[1:-1], start=1):
        following = route[k + 1]
        if following == GOAL:
            crossing = tuple(reversed(last.waypoints))
        else:
            crossing = dense.edge(patch_id, following).oriented(patch_id)
        walk = intra_patch_walk(dense.patch(patch_id), entry, crossing[0], rotation_cost)
        if len(walk) > 1:
            segments.append(PlanSegment(kind=MotionKind.INTRA_VERTEX, waypoints=tuple(walk)))
        segments.append(PlanSegment(kind=MotionKind.INTER_VERTEX, waypoints=crossing))
        entry = crossing[-1]
    return segments
