from __future__ import annotations

import logging
import math
import time
from typing_extensions import Optional

import networkx as nx
import numpy as np
from pydantic import Field
from scipy.spatial import cKDTree

from ..errors import InvalidQuery, NoPath
from ..geometry import Configuration, RigidObject, RotationTable, Scene, contains_points, segments_hit_polytope
from ..motion import MotionKind, MotionPlan, PlanSegment
from ..settings import resolve_eps
from ..value_object import FloatArray, IntArray, ValueObject
from .validate import interpolate_poses

logger = logging.getLogger(__name__)

START = "start"
GOAL = "goal"


class PrmParams(ValueObject):
    n_samples: int = Field(default=500, ge=1)
    k: int = Field(default=10, ge=1)
    "Neighbours each sample tries to connect to."

    resolution: float = Field(default=0.05, gt=0.0)
    "Collision-check spacing along an edge, as a fraction of the object length."

    time_budget: Optional[float] = Field(default=None, gt=0.0)
    "Seconds of sampling before the roadmap is connected with what it has."

    seed: int = 0


class PrmRoadmap(ValueObject):
    """
    Collision-free samples joined by straight edges that passed discrete checks at `resolution`. Edge `k` joins
    samples `edges[k, 0]` and `edges[k, 1]` at cost `costs[k]`.
    """

    positions: FloatArray
    rotations: IntArray
    edges: IntArray
    costs: FloatArray
    resolution: float
    k: int = 10

    @property
    def n_samples(self) -> int:
        return int(self.positions.shape[0])

    def config(self, index: int) -> Configuration:
        return Configuration(p=self.positions[index], rot_index=int(self.rotations[index]))

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_samples))
        for (a, b), cost in zip(self.edges.reshape(-1, 2), self.costs):
            graph.add_edge(int(a), int(b), weight=float(cost))
        return graph


def poses_free(
    obj: RigidObject, positions: np.ndarray, matrices: np.ndarray, scene: Scene, eps: Optional[float] = None
) -> np.ndarray:
    """True per pose when no edge or spoke of the object crosses an obstacle and every point is inside the scene."""

    eps = resolve_eps(eps)
    posed = np.einsum("nij,pj->npi", matrices, obj.body_points) + positions[:, None, :]
    free = contains_points(scene.bounds, posed, eps).all(axis=1)
    pairs = obj.static_pairs
    starts, ends = posed[:, pairs[:, 0]].reshape(-1, obj.dim), posed[:, pairs[:, 1]].reshape(-1, obj.dim)
    for obstacle in scene.obstacles:
        free &= ~segments_hit_polytope(obstacle, starts, ends, eps).reshape(len(posed), -1).any(axis=1)
    return free


def check_count(q_from: Configuration, q_to: Configuration, obj: RigidObject, table: RotationTable, step: float) -> int:
    """Interpolation steps for an edge: the smallest power of two keeping every body point's move below `step`."""

    travel = float(np.linalg.norm(q_to.p - q_from.p))
    travel += abs(table.step_angle(q_from.rot_index, q_to.rot_index)) * obj.max_radius
    if travel <= step:
        return 1
    return 2 ** math.ceil(math.log2(travel / step))


def edge_free(
    q_from: Configuration,
    q_to: Configuration,
    scene: Scene,
    obj: RigidObject,
    table: RotationTable,
    resolution: float,
    eps: Optional[float] = None,
) -> bool:
    steps = check_count(q_from, q_to, obj, table, resolution * obj.length)
    positions, matrices = interpolate_poses(q_from, q_to, table, steps)
    return bool(poses_free(obj, positions, matrices, scene, eps).all())


def edge_cost(q_from: Configuration, q_to: Configuration, obj: RigidObject, table: RotationTable) -> float:
    turn = abs(table.step_angle(q_from.rot_index, q_to.rot_index))
    return q_from.translation_distance(q_to) + turn * obj.max_radius


def prm_build(
    scene: Scene,
    obj: RigidObject,
    params: PrmParams = PrmParams(),
    table: Optional[RotationTable] = None,
    eps: Optional[float] = None,
) -> PrmRoadmap:
    """
    Sample collision-free configurations uniformly (positions in the scene box, orientations from the rotation
    table) and join each to its `k` nearest neighbours by position wherever the straight edge passes the discrete
    checks.
    """

    table = table or RotationTable.for_dimension(obj.dim, RotationTable.default_count(obj.dim))
    rng = np.random.default_rng(params.seed)
    started = time.perf_counter()

    positions: list[np.ndarray] = []
    rotations: list[int] = []
    batch = max(params.n_samples // 4, 16)
    attempts = 0
    while len(positions) < params.n_samples and attempts < 50 * params.n_samples:
        if params.time_budget is not None and time.perf_counter() - started > params.time_budget:
            logger.info("sampling budget spent after %d samples", len(positions))
            break
        p = rng.uniform(scene.lo, scene.hi, size=(batch, obj.dim))
        r = rng.integers(0, table.n_r, size=batch)
        free = poses_free(obj, p, table.matrices[r], scene, eps)
        attempts += batch
        for k in np.flatnonzero(free)[: params.n_samples - len(positions)]:
            positions.append(p[k])
            rotations.append(int(r[k]))

    points = np.array(positions).reshape(-1, obj.dim)
    configs = [Configuration(p=p, rot_index=r) for p, r in zip(points, rotations)]
    edges: list[tuple[int, int]] = []
    costs: list[float] = []
    if len(configs) > 1:
        _, neighbours = cKDTree(points).query(points, k=min(params.k + 1, len(configs)))
        candidates = sorted({(min(a, int(b)), max(a, int(b))) for a, row in enumerate(neighbours) for b in row[1:]})
        for a, b in candidates:
            if edge_free(configs[a], configs[b], scene, obj, table, params.resolution, eps):
                edges.append((a, b))
                costs.append(edge_cost(configs[a], configs[b], obj, table))

    logger.info(
        "PRM with %d samples and %d edges at resolution %.3g (%.2f s)",
        len(configs),
        len(edges),
        params.resolution,
        time.perf_counter() - started,
    )
    return PrmRoadmap(
        positions=points,
        rotations=np.array(rotations, dtype=np.int64),
        edges=np.array(edges, dtype=np.int64).reshape(-1, 2),
        costs=np.array(costs),
        resolution=params.resolution,
        k=params.k,
    )


def prm_query(
    roadmap: PrmRoadmap,
    scene: Scene,
    obj: RigidObject,
    q_start: Configuration,
    q_end: Configuration,
    table: Optional[RotationTable] = None,
    eps: Optional[float] = None,
) -> MotionPlan:
    """
    Connect both queries to their nearest roadmap samples and search the roadmap with Dijkstra. The result is a
    single segment through the visited samples.

    Raises:
        InvalidQuery: A query configuration collides.
        NoPath: The queries do not connect through the roadmap.
    """

    table = table or RotationTable.for_dimension(obj.dim, RotationTable.default_count(obj.dim))
    for role, q in ((START, q_start), (GOAL, q_end)):
        if not poses_free(obj, q.p[None, :], table[q.rot_index][None], scene, eps)[0]:
            raise InvalidQuery(f"the {role} configuration collides")

    graph = roadmap.graph()
    graph.add_nodes_from((START, GOAL))
    if edge_free(q_start, q_end, scene, obj, table, roadmap.resolution, eps):
        graph.add_edge(START, GOAL, weight=edge_cost(q_start, q_end, obj, table))
    if roadmap.n_samples:
        tree = cKDTree(roadmap.positions)
        for node, q in ((START, q_start), (GOAL, q_end)):
            _, nearest = tree.query(q.p, k=min(roadmap.k, roadmap.n_samples))
            for index in np.atleast_1d(nearest):
                sample = roadmap.config(int(index))
                if edge_free(q, sample, scene, obj, table, roadmap.resolution, eps):
                    graph.add_edge(node, int(index), weight=edge_cost(q, sample, obj, table))

    try:
        route = nx.dijkstra_path(graph, START, GOAL)
    except nx.NetworkXNoPath as error:
        raise NoPath("the PRM does not connect the start and goal") from error

    waypoints = [q_start] + [roadmap.config(node) for node in route[1:-1]] + [q_end]
    return MotionPlan.from_segments([PlanSegment(kind=MotionKind.INTER_VERTEX, waypoints=tuple(waypoints))])
