"""How the number of traversal problems and the size of one traversal MILP grow with the discretization."""

from __future__ import annotations

from typing_extensions import Optional, Sequence

from ..decompose import CoarseGraph, construct_coarse_graph
from ..densegraph import BuildParams, PatchId, TraversalProblem, build_traversal_model, free_configuration_count
from ..geometry import Configuration, ConvexPolytope, RigidObject, RotationTable, Scene


def two_box_cover() -> CoarseGraph:
    """An obstacle-free 4 x 2 scene covered by two overlapping boxes."""

    scene = Scene(lo=[0.0, 0.0], hi=[4.0, 2.0])
    boxes = [ConvexPolytope.from_box([0.0, 0.0], [2.5, 2.0]), ConvexPolytope.from_box([1.5, 0.0], [4.0, 2.0])]
    return construct_coarse_graph(boxes, scene)


def count_traversal_problems(
    n_r: int, n_t: int, obj: Optional[RigidObject] = None, coarse: Optional[CoarseGraph] = None
) -> int:
    """Free boundary configurations for the given discretization: the number of traversal problems to certify."""

    obj = obj or RigidObject.stick(0.4, 0.1)
    coarse = coarse or two_box_cover()
    table = RotationTable.for_dimension(obj.dim, n_r)
    return free_configuration_count(coarse, obj, table, BuildParams(n_t=n_t, n_r=n_r))


def constraint_growth(
    n_divisions_list: Sequence[int], obj: Optional[RigidObject] = None, waypoints: int = 1
) -> list[tuple[int, int]]:
    """
    Row count of one fixed traversal MILP across interpolation counts.

    Returns:
        list[tuple[int, int]]: `(n_divisions, rows)` per entry of `n_divisions_list`.
    """

    obj = obj or RigidObject.stick(0.4, 0.1)
    coarse = two_box_cover()
    table = RotationTable.for_dimension(obj.dim, 12)
    problem = TraversalProblem(
        source=PatchId(i=0, j=1, n=0),
        target=PatchId(i=0, j=1, n=1),
        context=(0, 1),
        regions=coarse.polytopes,
        waypoints=waypoints,
        sources=(Configuration(p=[1.8, 0.5], rot_index=0),),
        targets=(Configuration(p=[2.2, 1.5], rot_index=0),),
    )
    growth = []
    for n_divisions in n_divisions_list:
        params = BuildParams(n_divisions=n_divisions, n_r=12)
        traversal = build_traversal_model(problem, obj, table, coarse.scene, params)
        growth.append((n_divisions, traversal.model.n_rows))
    return growth
