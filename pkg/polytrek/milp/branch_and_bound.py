from __future__ import annotations

import heapq
import itertools
import logging
from enum import Enum
from typing_extensions import Optional

import numpy as np

from ..errors import NumericalFailure
from .model import MilpModel, MilpSolution, Status
from .relaxation import RelaxationEngine, relaxation_engine

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-6
DEFAULT_NODE_LIMIT = 100_000


class SolveMode(str, Enum):
    OPTIMAL = "optimal"
    FEASIBILITY = "feasibility"


class BranchAndBound:
    """
    Best-first branch-and-bound over the binaries of a MilpModel.

    Open nodes are ordered by relaxation bound, then by depth (deeper first), then by creation order. The branching
    variable is the most fractional binary, lowest index on ties, and the child that fixes it to its nearest integer
    is created first. Both rules are deterministic, so identical models give identical solutions.

    In FEASIBILITY mode the search stops at the first integral incumbent.

    Example:
        ```
        solution = BranchAndBound(model, mode=SolveMode.FEASIBILITY).solve()
        if solution.is_optimal:
            print(solution.binaries(model))
        ```
    """

    def __init__(
        self,
        model: MilpModel,
        mode: SolveMode = SolveMode.OPTIMAL,
        node_limit: int = DEFAULT_NODE_LIMIT,
        engine: Optional[RelaxationEngine] = None,
    ):
        self.model = model
        self.mode = SolveMode(mode)
        self.node_limit = node_limit
        self.engine = engine or relaxation_engine(model)
        self.nodes = 0
        self._incumbent: Optional[np.ndarray] = None
        self._incumbent_value = np.inf

    def solve(self) -> MilpSolution:
        model = self.model
        binaries = model.binary_slice
        counter = itertools.count()
        root = self._relax(np.array(model.lower), np.array(model.upper))
        if root is None:
            return MilpSolution(status=Status.INFEASIBLE, nodes=self.nodes)
        root_bound = root[1]
        heap: list[tuple[float, int, int, np.ndarray, np.ndarray, np.ndarray]] = []
        heapq.heappush(heap, (root[1], 0, next(counter), np.array(model.lower), np.array(model.upper), root[0]))

        unresolved = False
        while heap:
            bound, negative_depth, _, lower, upper, x = heapq.heappop(heap)
            if bound >= self._incumbent_value - FEASIBILITY_TOL:
                continue
            fractional = np.abs(x[binaries] - np.round(x[binaries]))
            free = lower[binaries] < upper[binaries]
            if fractional.max(initial=0.0) <= FEASIBILITY_TOL:
                if self._accept(x, lower, upper):
                    if self.mode is SolveMode.FEASIBILITY:
                        break
                    continue
                if not free.any():
                    logger.debug("integral leaf with every binary fixed failed its row check")
                    unresolved = True
                    continue
                # Near-integral but rejected: keep searching below it on a binary that is still free
                fractional = np.where(free, fractional + 1.0, 0.0)
            if self.nodes >= self.node_limit:
                logger.debug("node limit %d reached with %d open nodes", self.node_limit, len(heap))
                return self._result(Status.ITERATION_LIMIT)

            branch = model.n_cont + int(np.argmax(fractional))
            nearest = float(np.round(x[branch]))
            for value in (nearest, 1.0 - nearest):
                child_lower, child_upper = lower.copy(), upper.copy()
                child_lower[branch] = child_upper[branch] = value
                relaxed = self._relax(child_lower, child_upper)
                if relaxed is None or relaxed[1] >= self._incumbent_value - FEASIBILITY_TOL:
                    continue
                heapq.heappush(
                    heap, (relaxed[1], negative_depth - 1, next(counter), child_lower, child_upper, relaxed[0])
                )

        if self._incumbent is None:
            return MilpSolution(status=Status.ITERATION_LIMIT if unresolved else Status.INFEASIBLE, nodes=self.nodes)
        if root_bound > self._incumbent_value + FEASIBILITY_TOL * (1.0 + abs(self._incumbent_value)):
            raise NumericalFailure(
                f"relaxation bound {root_bound:.9g} exceeds the incumbent {self._incumbent_value:.9g}; "
                "the relaxation engine lost accuracy"
            )
        return self._result(Status.ITERATION_LIMIT if unresolved and self.mode is SolveMode.OPTIMAL else Status.OPTIMAL)

    def _relax(self, lower: np.ndarray, upper: np.ndarray) -> Optional[tuple[np.ndarray, float]]:
        self.nodes += 1
        result = self.engine.solve(lower, upper)
        if not result.feasible:
            return None
        return result.x, result.fun

    def _accept(self, x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> bool:
        # Snap binaries, re-solve the continuous part with them fixed, then certify every row
        model = self.model
        binaries = model.binary_slice
        snapped = np.round(x[binaries])
        fixed_lower, fixed_upper = lower.copy(), upper.copy()
        fixed_lower[binaries] = fixed_upper[binaries] = snapped
        relaxed = self._relax(fixed_lower, fixed_upper)
        if relaxed is None:
            return False
        candidate = relaxed[0].copy()
        candidate[binaries] = snapped
        if model.violation(candidate) > FEASIBILITY_TOL:
            logger.debug("rejected an integral node violating a row by %.3g", model.violation(candidate))
            return False
        value = model.evaluate(candidate)
        if value < self._incumbent_value:
            self._incumbent = candidate
            self._incumbent_value = value
        return True

    def _result(self, status: Status) -> MilpSolution:
        if self._incumbent is None:
            return MilpSolution(status=status, nodes=self.nodes)
        return MilpSolution(
            status=status, values=self._incumbent, objective=self._incumbent_value, nodes=self.nodes
        )
