from __future__ import annotations

import hashlib
from enum import Enum
from functools import cached_property
from typing_extensions import Optional

import numpy as np
from pydantic import Field, model_validator
from scipy import sparse

from ..value_object import FloatArray, IntArray, ValueObject
from .lp_format import to_lp_text


class Sense(int, Enum):
    LE = 0
    EQ = 1


class Status(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    ITERATION_LIMIT = "IterationLimit"


class MilpModel(ValueObject):
    """
    A minimization over `n_cont` continuous variables followed by `n_bin` binaries, with sparse constraint rows
    `sum_k values[k] x[cols[k]]  (<= | =)  rhs[rows[k]]` and per-variable bounds.

    Binaries are always bounded to [0, 1]; relaxing a model means treating them as continuous on that box.
    """

    n_cont: int = Field(ge=0)
    n_bin: int = Field(ge=0)
    objective: FloatArray
    lower: FloatArray
    upper: FloatArray
    rows: IntArray
    cols: IntArray
    values: FloatArray
    rhs: FloatArray
    senses: IntArray
    big_m: float = 0.0
    names: tuple[str, ...] = ()

    @model_validator(mode="after")
    def _check_sizes(self) -> MilpModel:
        n = self.n_cont + self.n_bin
        for name in ("objective", "lower", "upper"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} must have one entry per variable ({n})")
        if not (self.rows.shape == self.cols.shape == self.values.shape):
            raise ValueError("rows, cols and values must have equal length")
        if self.rhs.shape != self.senses.shape:
            raise ValueError("rhs and senses must have one entry per constraint")
        if self.cols.size and (self.cols.min() < 0 or self.cols.max() >= n):
            raise ValueError("constraint column out of range")
        if self.rows.size and (self.rows.min() < 0 or self.rows.max() >= self.rhs.shape[0]):
            raise ValueError("constraint row out of range")
        binaries = slice(self.n_cont, n)
        if np.any(self.lower[binaries] < 0.0) or np.any(self.upper[binaries] > 1.0):
            raise ValueError("binary variables must be bounded to [0, 1]")
        if np.any(self.lower > self.upper):
            raise ValueError("a variable has lower bound above its upper bound")
        if self.names and len(self.names) != n:
            raise ValueError("names must have one entry per variable")
        return self

    @property
    def n_vars(self) -> int:
        return self.n_cont + self.n_bin

    @property
    def n_rows(self) -> int:
        return int(self.rhs.shape[0])

    @property
    def binary_slice(self) -> slice:
        return slice(self.n_cont, self.n_vars)

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        return sparse.csr_matrix((self.values, (self.rows, self.cols)), shape=(self.n_rows, self.n_vars))

    @cached_property
    def inequality_mask(self) -> np.ndarray:
        return self.senses == Sense.LE.value

    def split(self) -> tuple[sparse.csr_matrix, np.ndarray, sparse.csr_matrix, np.ndarray]:
        """(A_ub, b_ub, A_eq, b_eq)."""

        ub = self.inequality_mask
        return self.matrix[ub], self.rhs[ub], self.matrix[~ub], self.rhs[~ub]

    def violation(self, x: np.ndarray) -> float:
        """Largest violation of any row or bound at `x` (0 when feasible)."""

        x = np.asarray(x, dtype=np.float64)
        activity = self.matrix @ x - self.rhs
        row_violation = np.where(self.inequality_mask, np.maximum(activity, 0.0), np.abs(activity))
        bound_violation = np.maximum(self.lower - x, 0.0) + np.maximum(x - self.upper, 0.0)
        return float(max(row_violation.max(initial=0.0), bound_violation.max(initial=0.0)))

    def integrality_gap(self, x: np.ndarray) -> float:
        binaries = np.asarray(x)[self.binary_slice]
        return float(np.abs(binaries - np.round(binaries)).max(initial=0.0))

    def evaluate(self, x: np.ndarray) -> float:
        return float(self.objective @ np.asarray(x, dtype=np.float64))

    def variable_name(self, index: int) -> str:
        if self.names:
            return self.names[index]
        return f"x{index}" if index < self.n_cont else f"b{index - self.n_cont}"

    def digest(self) -> str:
        """sha256 over every array of the model; equal digests mean identical models."""

        hasher = hashlib.sha256()
        hasher.update(np.array([self.n_cont, self.n_bin], dtype="<i8").tobytes())
        for name in ("objective", "lower", "upper", "values", "rhs"):
            hasher.update(getattr(self, name).astype("<f8").tobytes())
        for name in ("rows", "cols", "senses"):
            hasher.update(getattr(self, name).astype("<i8").tobytes())
        hasher.update(np.float64(self.big_m).tobytes())
        return hasher.hexdigest()

    def with_bounds(self, lower: np.ndarray, upper: np.ndarray) -> MilpModel:
        return self.model_copy(update={"lower": _readonly(lower), "upper": _readonly(upper)})

    def to_lp_text(self) -> str:
        return to_lp_text(self)


class MilpSolution(ValueObject):
    """
    Outcome of a solve. `values` and `objective` are set for Optimal, and for IterationLimit when an incumbent
    exists.
    """

    status: Status
    values: Optional[FloatArray] = None
    objective: Optional[float] = None
    nodes: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def binaries(self, model: MilpModel) -> np.ndarray:
        return np.round(self.values[model.binary_slice]).astype(np.int64)


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64)
    array.setflags(write=False)
    return array
