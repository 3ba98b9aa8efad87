from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing_extensions import Optional

import numpy as np
from scipy.optimize import linprog

from ..errors import NumericalFailure, Unbounded
from ..settings import get_settings
from .model import MilpModel
from .simplex import DenseSimplex, LpResult

logger = logging.getLogger(__name__)


class RelaxationEngine(ABC):
    """
    Solves the LP relaxation of one model under per-node variable bounds. An engine is bound to its model and keeps
    whatever matrix form its solver needs.
    """

    def __init__(self, model: MilpModel):
        self.model = model

    @abstractmethod
    def solve(self, lower: np.ndarray, upper: np.ndarray) -> LpResult: ...


class DenseRelaxation(RelaxationEngine):
    def __init__(self, model: MilpModel, simplex: Optional[DenseSimplex] = None):
        super().__init__(model)
        A_ub, b_ub, A_eq, b_eq = model.split()
        self._A_ub = A_ub.toarray()
        self._b_ub = np.array(b_ub)
        self._A_eq = A_eq.toarray()
        self._b_eq = np.array(b_eq)
        self._simplex = simplex or DenseSimplex()

    def solve(self, lower: np.ndarray, upper: np.ndarray) -> LpResult:
        return self._simplex.solve(
            np.asarray(self.model.objective), self._A_ub, self._b_ub, self._A_eq, self._b_eq, lower, upper
        )


class HighsRelaxation(RelaxationEngine):
    """scipy `linprog(method="highs")` over the sparse rows."""

    def __init__(self, model: MilpModel):
        super().__init__(model)
        A_ub, b_ub, A_eq, b_eq = model.split()
        self._ub = (A_ub, b_ub) if A_ub.shape[0] else (None, None)
        self._eq = (A_eq, b_eq) if A_eq.shape[0] else (None, None)

    def solve(self, lower: np.ndarray, upper: np.ndarray) -> LpResult:
        if np.any(lower > upper):
            return LpResult(False, None, None)
        result = linprog(
            self.model.objective,
            A_ub=self._ub[0],
            b_ub=self._ub[1],
            A_eq=self._eq[0],
            b_eq=self._eq[1],
            bounds=np.column_stack([lower, upper]),
            method="highs",
        )
        if result.status == 0:
            return LpResult(True, np.asarray(result.x), float(result.fun))
        if result.status == 2:
            return LpResult(False, None, None)
        if result.status == 3:
            raise Unbounded("the LP relaxation is unbounded")
        raise NumericalFailure(f"HiGHS relaxation failed with status {result.status}: {result.message}")


def relaxation_engine(model: MilpModel, engine: Optional[str] = None) -> RelaxationEngine:
    """
    Pick the relaxation engine: `dense`, `highs`, or `auto` (dense while rows times columns stays within
    `PlannerSettings.dense_limit`). Defaults to the global `lp_engine` setting.
    """

    settings = get_settings()
    engine = engine or settings.lp_engine
    if engine == "auto":
        engine = "dense" if model.n_rows * model.n_vars <= settings.dense_limit else "highs"
    logger.debug("relaxation engine %s for %d rows x %d vars", engine, model.n_rows, model.n_vars)
    if engine == "dense":
        return DenseRelaxation(model)
    if engine == "highs":
        return HighsRelaxation(model)
    raise ValueError(f"unknown LP engine {engine!r}")
