from __future__ import annotations

import logging
from typing_extensions import Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from ..errors import NumericalFailure, Unbounded
from ..settings import get_settings
from .branch_and_bound import DEFAULT_NODE_LIMIT, FEASIBILITY_TOL, BranchAndBound, SolveMode
from .lp_format import dump_model
from .model import MilpModel, MilpSolution, Sense, Status
from .relaxation import HighsRelaxation, relaxation_engine

logger = logging.getLogger(__name__)


def solve_lp(model: MilpModel, engine: Optional[str] = None) -> MilpSolution:
    """
    Solve the LP relaxation of `model` (binaries relaxed to [0, 1]).

    Raises:
        Unbounded: The relaxation is unbounded.
        NumericalFailure: The engine could not finish.
    """

    result = relaxation_engine(model, engine).solve(np.array(model.lower), np.array(model.upper))
    if not result.feasible:
        return MilpSolution(status=Status.INFEASIBLE, nodes=1)
    return MilpSolution(status=Status.OPTIMAL, values=result.x, objective=result.fun, nodes=1)


def solve_milp(
    model: MilpModel,
    mode: SolveMode = SolveMode.OPTIMAL,
    node_limit: int = DEFAULT_NODE_LIMIT,
    backend: Optional[str] = None,
    engine: Optional[str] = None,
    tag: Optional[str] = None,
) -> MilpSolution:
    """
    Solve `model` to global optimality, or to the first feasible point in FEASIBILITY mode.

    `backend` defaults to `PlannerSettings.milp_backend`; `auto` picks the in-house branch-and-bound for models with at
    most `PlannerSettings.builtin_binaries` binaries and HiGHS otherwise. When `PlannerSettings.debug_dump_dir` is set
    the model is written there in LP format first, named after `tag` (or its digest).
    """

    settings = get_settings()
    if settings.debug_dump_dir is not None:
        dump_model(model, settings.debug_dump_dir, tag or model.digest()[:16])
    backend = backend or settings.milp_backend
    if backend == "auto":
        backend = "builtin" if model.n_bin <= settings.builtin_binaries else "highs"
        logger.debug("auto backend chose %s for %d binaries", backend, model.n_bin)
    if backend == "builtin":
        return BranchAndBound(model, mode=mode, node_limit=node_limit, engine=relaxation_engine(model, engine)).solve()
    if backend == "highs":
        return _solve_highs(model, SolveMode(mode), node_limit)
    raise ValueError(f"unknown MILP backend {backend!r}")


def _solve_highs(model: MilpModel, mode: SolveMode, node_limit: int) -> MilpSolution:
    integrality = np.zeros(model.n_vars)
    integrality[model.binary_slice] = 1
    lower_rows = np.where(model.senses == Sense.EQ.value, model.rhs, -np.inf)
    constraints = [LinearConstraint(model.matrix, lower_rows, model.rhs)] if model.n_rows else []
    # A zero objective lets HiGHS stop at its first integral point
    objective = np.zeros(model.n_vars) if mode is SolveMode.FEASIBILITY else model.objective
    result = milp(
        objective,
        integrality=integrality,
        bounds=Bounds(model.lower, model.upper),
        constraints=constraints,
        options={"node_limit": node_limit},
    )
    nodes = int(getattr(result, "mip_node_count", 0) or 0)
    if result.status == 2:
        return MilpSolution(status=Status.INFEASIBLE, nodes=nodes)
    if result.status == 3:
        raise Unbounded("the MILP is unbounded")
    if result.x is None:
        if result.status == 1:
            return MilpSolution(status=Status.ITERATION_LIMIT, nodes=nodes)
        raise NumericalFailure(f"HiGHS MILP failed with status {result.status}: {result.message}")

    values = _polish(model, np.asarray(result.x))
    if values is None:
        raise NumericalFailure("the HiGHS incumbent does not survive re-checking")
    status = Status.OPTIMAL if result.status == 0 else Status.ITERATION_LIMIT
    return MilpSolution(status=status, values=values, objective=model.evaluate(values), nodes=nodes)


def _polish(model: MilpModel, x: np.ndarray) -> Optional[np.ndarray]:
    binaries = model.binary_slice
    lower, upper = np.array(model.lower), np.array(model.upper)
    lower[binaries] = upper[binaries] = np.round(x[binaries])
    result = HighsRelaxation(model).solve(lower, upper)
    if not result.feasible:
        return None
    values = result.x.copy()
    values[binaries] = lower[binaries]
    if model.violation(values) > FEASIBILITY_TOL:
        return None
    return values
