from __future__ import annotations

import logging
import math
from enum import Enum
from typing_extensions import Optional, Sequence

import numpy as np
from pydantic import Field, model_validator

from ..encode import (
    DEFAULT_DIVISIONS,
    AffinePoint,
    PoseExpr,
    apex_matrix,
    segment_constraints,
    static_segments,
    sweep_segments,
)
from ..errors import SolverError
from ..geometry import Configuration, ConvexPolytope, RigidObject, RotationTable, Scene
from ..milp import MilpBuilder, MilpModel, SolveMode, Status, big_m_for, solve_milp
from ..milp.branch_and_bound import DEFAULT_NODE_LIMIT
from ..settings import resolve_eps
from ..value_object import IntArray, ValueObject
from .fast_path import fast_verify_n0
from .patches import ConfigPatch, PatchId

logger = logging.getLogger(__name__)


class BuildParams(ValueObject):
    """Knobs of the dense-graph construction and of every traversal check it runs."""

    n_t: int = Field(default=60, ge=1)
    "Boundary sites per 2D intersection."

    n_r: Optional[int] = Field(default=None, ge=1)
    "Rotation count; 12 in 2D and 24 in 3D when unset."

    h: Optional[float] = Field(default=None, gt=0.0)
    "3D facet grid spacing; the object's smallest bounding-box side when unset."

    waypoints: int = Field(default=0, ge=0)
    "Intermediate waypoints N of the first attempt."

    retry: bool = True
    "Retry an infeasible pair once with N + 1 waypoints."

    n_divisions: int = Field(default=DEFAULT_DIVISIONS, ge=1)
    dtheta_max: float = Field(default=math.pi / 3.0, gt=0.0, lt=math.pi)
    node_limit: int = Field(default=DEFAULT_NODE_LIMIT, ge=1)

    max_endpoint_configs: int = Field(default=8, ge=1)
    "Configurations per patch offered to the MILP, nearest to the other patch first."

    mode: SolveMode = SolveMode.FEASIBILITY
    fast_path: bool = True
    "Answer N = 0 problems by direct evaluation instead of a MILP."


class TraversalProblem(ValueObject):
    """
    Move from a configuration of patch `source` to one of patch `target` with `waypoints` intermediate poses, staying
    in the union of `regions` (the polytopes `context` of the coarse graph).
    """

    source: PatchId
    target: PatchId
    context: tuple[int, ...]
    regions: tuple[ConvexPolytope, ...]
    waypoints: int = Field(default=0, ge=0)
    sources: tuple[Configuration, ...]
    targets: tuple[Configuration, ...]

    @model_validator(mode="after")
    def _check_problem(self) -> TraversalProblem:
        if not self.sources or not self.targets:
            raise ValueError("both patches need at least one configuration")
        if len(self.context) != len(self.regions):
            raise ValueError("one region per context polytope")
        if not {self.source.i, self.source.j} & {self.target.i, self.target.j}:
            raise ValueError(f"patches {self.source} and {self.target} share no polytope")
        return self

    @classmethod
    def between(
        cls, u: ConfigPatch, w: ConfigPatch, polytopes: Sequence[ConvexPolytope], waypoints: int = 0
    ) -> TraversalProblem:
        context = tuple(sorted({*u.edge, *w.edge}))
        return cls(
            source=u.id,
            target=w.id,
            context=context,
            regions=tuple(polytopes[k] for k in context),
            waypoints=waypoints,
            sources=u.configs,
            targets=w.configs,
        )

    @property
    def dim(self) -> int:
        return self.sources[0].dim

    def with_waypoints(self, waypoints: int) -> TraversalProblem:
        return self.model_copy(update={"waypoints": waypoints})

    def nearest(self, limit: int) -> TraversalProblem:
        """Keep at most `limit` configurations per side, those nearest the other side's centroid (stable order)."""

        return self.model_copy(
            update={
                "sources": _nearest(self.sources, self.targets, limit),
                "targets": _nearest(self.targets, self.sources, limit),
            }
        )


class TraversalStatus(str, Enum):
    CERTIFIED = "Certified"
    INFEASIBLE = "Infeasible"
    UNVERIFIED = "Unverified"
    "The check ran out of nodes or failed numerically; a later run may retry it."


class TraversalResult(ValueObject):
    status: TraversalStatus
    waypoints: tuple[Configuration, ...] = ()
    cost: Optional[float] = None
    nodes: int = 0
    fast_path: bool = False
    pruned: bool = False

    @property
    def certified(self) -> bool:
        return self.status is TraversalStatus.CERTIFIED


class TraversalModel(ValueObject):
    """The assembled MILP with the model columns of every decision the decoder reads."""

    model: MilpModel
    positions: IntArray
    "(N + 2, dim) position columns."

    rotations: IntArray
    "(N + 2, n_r) one-hot rotation columns."

    start: IntArray
    end: IntArray
    moves: IntArray
    "Per-step translate flag columns (empty in 3D)."


def build_traversal_model(
    problem: TraversalProblem,
    obj: RigidObject,
    table: RotationTable,
    scene: Scene,
    params: BuildParams = BuildParams(),
    eps: Optional[float] = None,
) -> TraversalModel:
    """
    Assemble the traversal MILP: waypoint positions bounded by the scene box with one-hot rotations, start and end
    chosen from the two configuration lists, each step either a translation or (2D only) a rotation within
    `dtheta_max`, and every sweep chord and intermediate pose certified inside the context polytopes. The objective
    is the total translation 1-norm.
    """

    eps = resolve_eps(eps)
    dim, n_r = table.dim, table.n_r
    count = problem.waypoints + 2
    lo, hi = scene.lo, scene.hi
    builder = MilpBuilder(big_m=big_m_for(scene, obj))

    positions = [builder.add_continuous_block(lo, hi, f"p{t}_") for t in range(count)]
    rotations = [builder.add_binaries(n_r, f"r{t}_") for t in range(count)]
    for selector in rotations:
        builder.add_eq({int(k): 1.0 for k in selector}, 1.0)

    start = _add_selection(builder, positions[0], rotations[0], problem.sources, "su")
    end = _add_selection(builder, positions[-1], rotations[-1], problem.targets, "sw")

    poses = [
        PoseExpr.symbolic(obj, positions[t], {k: int(rotations[t][k]) for k in range(n_r)}, table)
        for t in range(count)
    ]
    span = float((hi - lo).sum())
    objective: dict[int, float] = {}
    moves = []
    steps = table.allowed_steps(params.dtheta_max) if dim == 2 else []

    for t in range(count - 1):
        distance = builder.add_continuous_block(np.zeros(dim), hi - lo, f"d{t}_")
        for axis in range(dim):
            here, there, d = int(positions[t][axis]), int(positions[t + 1][axis]), int(distance[axis])
            builder.add_le({there: 1.0, here: -1.0, d: -1.0}, 0.0)
            builder.add_le({here: 1.0, there: -1.0, d: -1.0}, 0.0)
            objective[d] = 1.0

        if dim == 3:
            for k in range(n_r):
                builder.add_eq({int(rotations[t + 1][k]): 1.0, int(rotations[t][k]): -1.0}, 0.0)
            segments = sweep_segments(poses[t], poses[t + 1])
        else:
            move = builder.add_binary(f"or{t}")
            moves.append(move)
            terms = {int(d): 1.0 for d in distance}
            terms[move] = -span
            builder.add_le(terms, 0.0)
            apexes = _add_rotation_step(builder, obj, table, steps, rotations[t], rotations[t + 1], move, poses[t], t)
            segments = sweep_segments(poses[t], poses[t + 1], apexes)

        for m, (first, second, _) in enumerate(segments):
            segment_constraints(builder, first, second, problem.regions, params.n_divisions, eps, prefix=f"t{t}s{m}")

    for t in range(1, count - 1):
        for m, (first, second, _) in enumerate(static_segments(obj, poses[t])):
            segment_constraints(builder, first, second, problem.regions, params.n_divisions, eps, prefix=f"w{t}s{m}")

    builder.set_objective(objective)
    model, position = builder.build()
    return TraversalModel(
        model=model,
        positions=position[np.array(positions, dtype=np.int64)],
        rotations=position[np.array(rotations, dtype=np.int64)],
        start=position[start],
        end=position[end],
        moves=position[np.array(moves, dtype=np.int64)],
    )


def _add_selection(
    builder: MilpBuilder,
    position: np.ndarray,
    rotation: np.ndarray,
    configs: Sequence[Configuration],
    prefix: str,
) -> np.ndarray:
    selectors = builder.add_binaries(len(configs), prefix)
    builder.add_eq({int(s): 1.0 for s in selectors}, 1.0)
    for axis in range(position.shape[0]):
        terms = {int(position[axis]): 1.0}
        for selector, q in zip(selectors, configs):
            terms[int(selector)] = -float(q.p[axis])
        builder.add_eq(terms, 0.0)
    for k in range(rotation.shape[0]):
        terms = {int(rotation[k]): 1.0}
        terms.update({int(s): -1.0 for s, q in zip(selectors, configs) if q.rot_index == k})
        builder.add_eq(terms, 0.0)
    return selectors


def _add_rotation_step(
    builder: MilpBuilder,
    obj: RigidObject,
    table: RotationTable,
    steps: list[tuple[int, int]],
    here: np.ndarray,
    there: np.ndarray,
    move: int,
    pose: PoseExpr,
    t: int,
) -> list[AffinePoint]:
    # gamma[k, k'] is the product of the two one-hot rotations, linearised by its marginals
    gamma = {pair: builder.add_continuous(0.0, 1.0, f"g{t}_{pair[0]}_{pair[1]}") for pair in steps}
    n_r = table.n_r
    for k in range(n_r):
        row = {index: 1.0 for (first, _), index in gamma.items() if first == k}
        row[int(here[k])] = -1.0
        builder.add_eq(row, 0.0)
        column = {index: 1.0 for (_, second), index in gamma.items() if second == k}
        column[int(there[k])] = -1.0
        builder.add_eq(column, 0.0)
    turning = {index: 1.0 for (first, second), index in gamma.items() if first != second}
    turning[move] = 1.0
    builder.add_le(turning, 1.0)

    matrices = {pair: apex_matrix(table, *pair) for pair in steps}
    apexes = []
    for vertex in obj.vertices:
        offset = AffinePoint(np.zeros(obj.dim), {index: matrices[pair] @ vertex for pair, index in gamma.items()})
        apexes.append(pose.center + offset)
    return apexes


def decode_traversal(
    traversal: TraversalModel, values: np.ndarray, problem: TraversalProblem
) -> tuple[tuple[Configuration, ...], float]:
    """
    Read the waypoint sequence from a solution. The end poses are the selected configurations exactly; positions
    along rotation steps are copied from their neighbour so every step is a pure translation or a pure rotation.
    """

    values = np.asarray(values)
    count = problem.waypoints + 2
    first = problem.sources[int(np.argmax(values[traversal.start]))]
    last = problem.targets[int(np.argmax(values[traversal.end]))]
    points = [first.p.copy()] + [values[traversal.positions[t]].copy() for t in range(1, count - 1)] + [last.p.copy()]
    rotations = [first.rot_index]
    rotations += [int(np.argmax(values[traversal.rotations[t]])) for t in range(1, count - 1)]
    rotations.append(last.rot_index)
    if problem.dim == 3:
        rotations = [first.rot_index] * (count - 1) + [last.rot_index]

    rotating = [bool(values[m] < 0.5) for m in traversal.moves]
    if rotating:
        for t in range(count - 2):
            if rotating[t]:
                points[t + 1] = points[t].copy()
        for t in range(count - 2, 0, -1):
            if not rotating[t]:
                break
            points[t] = points[t + 1].copy()

    points, rotations = split_mixed_steps(points, rotations)
    waypoints = tuple(Configuration(p=p, rot_index=k) for p, k in zip(points, rotations))
    cost = float(sum(np.abs(points[t + 1] - points[t]).sum() for t in range(len(points) - 1)))
    return waypoints, cost


def split_mixed_steps(points: list[np.ndarray], rotations: list[int]) -> tuple[list[np.ndarray], list[int]]:
    """
    Give every step that changes both the rotation and the position (a rotation whose end configurations differ
    within solver tolerance) its own translation first, so the rotation happens at one exact position.
    """

    out_points, out_rotations = [points[0]], [rotations[0]]
    for point, rotation in zip(points[1:], rotations[1:]):
        if rotation != out_rotations[-1] and not np.array_equal(point, out_points[-1]):
            out_points.append(point.copy())
            out_rotations.append(out_rotations[-1])
        out_points.append(point)
        out_rotations.append(rotation)
    return out_points, out_rotations


def provably_infeasible(problem: TraversalProblem, table: RotationTable, dtheta_max: float) -> bool:
    """
    Cheap necessary test: some source/target pair must be reachable in `waypoints + 1` steps, counting one step per
    `dtheta_max` of rotation plus one for any translation. In 3D the pair must share its rotation.
    """

    r_u = np.array([q.rot_index for q in problem.sources], dtype=np.int64)
    r_w = np.array([q.rot_index for q in problem.targets], dtype=np.int64)
    if table.dim == 3:
        return not np.intersect1d(r_u, r_w).shape[0]
    p_u = np.array([q.p for q in problem.sources])
    p_w = np.array([q.p for q in problem.targets])
    turns = np.abs(table.angle_table[r_u[:, None], r_w[None, :]])
    turn_steps = np.ceil(turns / dtheta_max - 1e-9)
    moved = np.abs(p_u[:, None, :] - p_w[None, :, :]).max(axis=2) > 1e-9
    return bool((turn_steps + moved).min() > problem.waypoints + 1)


def verify_traversal(
    problem: TraversalProblem,
    obj: RigidObject,
    table: RotationTable,
    scene: Scene,
    params: BuildParams = BuildParams(),
    eps: Optional[float] = None,
) -> TraversalResult:
    """
    Certify a motion from `problem.source` to `problem.target`, or show none exists with the given waypoint count.

    Pairs that fail `provably_infeasible` are rejected without solving. With no intermediate waypoints and
    `params.fast_path` the single step is evaluated directly over every configuration pair; otherwise the MILP is
    built over the `max_endpoint_configs` nearest configurations of each patch and solved.
    """

    eps = resolve_eps(eps)
    if provably_infeasible(problem, table, params.dtheta_max):
        return TraversalResult(status=TraversalStatus.INFEASIBLE, pruned=True)

    if params.fast_path and problem.waypoints == 0:
        found = fast_verify_n0(
            problem.sources, problem.targets, problem.regions, obj, table, params.n_divisions, params.dtheta_max, eps
        )
        if found is None:
            return TraversalResult(status=TraversalStatus.INFEASIBLE, fast_path=True)
        first, last, cost = found
        return TraversalResult(status=TraversalStatus.CERTIFIED, waypoints=(first, last), cost=cost, fast_path=True)

    trimmed = problem.nearest(params.max_endpoint_configs)
    traversal = build_traversal_model(trimmed, obj, table, scene, params, eps)
    tag = f"{problem.source}_{problem.target}_N{problem.waypoints}"
    try:
        solution = solve_milp(traversal.model, mode=params.mode, node_limit=params.node_limit, tag=tag)
    except SolverError as error:
        logger.warning("traversal %s -> %s left unverified: %s", problem.source, problem.target, error)
        return TraversalResult(status=TraversalStatus.UNVERIFIED)

    if solution.values is None:
        status = TraversalStatus.INFEASIBLE if solution.status is Status.INFEASIBLE else TraversalStatus.UNVERIFIED
        return TraversalResult(status=status, nodes=solution.nodes)
    waypoints, cost = decode_traversal(traversal, solution.values, trimmed)
    return TraversalResult(status=TraversalStatus.CERTIFIED, waypoints=waypoints, cost=cost, nodes=solution.nodes)


def _nearest(
    configs: tuple[Configuration, ...], others: tuple[Configuration, ...], limit: int
) -> tuple[Configuration, ...]:
    if len(configs) <= limit:
        return configs
    centroid = np.array([q.p for q in others]).mean(axis=0)
    distance = np.array([np.abs(q.p - centroid).sum() for q in configs])
    keep = np.sort(np.argsort(distance, kind="stable")[:limit])
    return tuple(configs[k] for k in keep)
