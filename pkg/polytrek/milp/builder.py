from __future__ import annotations

from typing_extensions import Mapping, Optional

import numpy as np

from .model import MilpModel, Sense

Terms = Mapping[int, float]
"Sparse linear expression: variable index to coefficient."


class MilpBuilder:
    """
    Mutable assembler for a MilpModel. Variables are created in any order; `build` renumbers them so continuous
    variables come first, as the model requires.

    Example:
        ```
        builder = MilpBuilder()
        x = builder.add_continuous(0.0, 10.0, "x")
        flag = builder.add_binary("flag")
        builder.add_le({x: 1.0, flag: -10.0}, 0.0)  # x <= 10 flag
        builder.set_objective({x: -1.0, flag: 1.0})
        model, position = builder.build()
        ```
    """

    def __init__(self, big_m: float = 0.0):
        self.big_m = big_m
        self._is_binary: list[bool] = []
        self._lower: list[float] = []
        self._upper: list[float] = []
        self._names: list[str] = []
        self._rows: list[np.ndarray] = []
        self._cols: list[np.ndarray] = []
        self._values: list[np.ndarray] = []
        self._rhs: list[float] = []
        self._senses: list[int] = []
        self._objective: dict[int, float] = {}

    @property
    def n_vars(self) -> int:
        return len(self._is_binary)

    @property
    def n_rows(self) -> int:
        return len(self._rhs)

    def add_continuous(self, lower: float = 0.0, upper: float = np.inf, name: Optional[str] = None) -> int:
        return self._add(False, lower, upper, name)

    def add_continuous_block(self, lower: np.ndarray, upper: np.ndarray, prefix: str) -> np.ndarray:
        return np.array([self.add_continuous(lo, hi, f"{prefix}{k}") for k, (lo, hi) in enumerate(zip(lower, upper))])

    def add_binary(self, name: Optional[str] = None) -> int:
        return self._add(True, 0.0, 1.0, name)

    def add_binaries(self, count: int, prefix: str) -> np.ndarray:
        return np.array([self.add_binary(f"{prefix}{k}") for k in range(count)], dtype=np.int64)

    def fix(self, index: int, value: float) -> None:
        self._lower[index] = value
        self._upper[index] = value

    def _add(self, binary: bool, lower: float, upper: float, name: Optional[str]) -> int:
        index = len(self._is_binary)
        self._is_binary.append(binary)
        self._lower.append(float(lower))
        self._upper.append(float(upper))
        self._names.append(f"{name}_{index}" if name else f"v{index}")
        return index

    def add_row(self, terms: Terms, sense: Sense, rhs: float) -> int:
        row = len(self._rhs)
        cols = np.fromiter(terms.keys(), dtype=np.int64, count=len(terms))
        values = np.fromiter(terms.values(), dtype=np.float64, count=len(terms))
        keep = values != 0.0
        self._rows.append(np.full(int(keep.sum()), row, dtype=np.int64))
        self._cols.append(cols[keep])
        self._values.append(values[keep])
        self._rhs.append(float(rhs))
        self._senses.append(sense.value)
        return row

    def add_le(self, terms: Terms, rhs: float) -> int:
        return self.add_row(terms, Sense.LE, rhs)

    def add_ge(self, terms: Terms, rhs: float) -> int:
        return self.add_row({k: -v for k, v in terms.items()}, Sense.LE, -rhs)

    def add_eq(self, terms: Terms, rhs: float) -> int:
        return self.add_row(terms, Sense.EQ, rhs)

    def add_rows(self, cols: np.ndarray, values: np.ndarray, rhs: np.ndarray, sense: Sense = Sense.LE) -> None:
        """
        Add a block of rows sharing one column pattern: row r is `sum_k values[r, k] x[cols[r, k]] (sense) rhs[r]`.
        """

        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        rhs = np.asarray(rhs, dtype=np.float64)
        first = len(self._rhs)
        row_ids = np.repeat(np.arange(first, first + rhs.shape[0]), cols.shape[1])
        flat_values = values.reshape(-1)
        keep = flat_values != 0.0
        self._rows.append(row_ids[keep])
        self._cols.append(cols.reshape(-1)[keep])
        self._values.append(flat_values[keep])
        self._rhs.extend(rhs.tolist())
        self._senses.extend([sense.value] * rhs.shape[0])

    def set_objective(self, terms: Terms) -> None:
        self._objective = dict(terms)

    def build(self) -> tuple[MilpModel, np.ndarray]:
        """
        Returns:
            tuple[MilpModel, np.ndarray]: The model and `position`, mapping each builder variable index to its
            column in the model.
        """

        is_binary = np.array(self._is_binary, dtype=bool)
        order = np.concatenate([np.flatnonzero(~is_binary), np.flatnonzero(is_binary)]).astype(np.int64)
        position = np.empty(self.n_vars, dtype=np.int64)
        position[order] = np.arange(self.n_vars)
        objective = np.zeros(self.n_vars)
        for index, coefficient in self._objective.items():
            objective[position[index]] += coefficient
        empty_i = np.zeros(0, dtype=np.int64)
        cols = np.concatenate(self._cols) if self._cols else empty_i
        model = MilpModel(
            n_cont=int((~is_binary).sum()),
            n_bin=int(is_binary.sum()),
            objective=objective,
            lower=np.array(self._lower)[order],
            upper=np.array(self._upper)[order],
            rows=np.concatenate(self._rows) if self._rows else empty_i,
            cols=position[cols],
            values=np.concatenate(self._values) if self._values else np.zeros(0),
            rhs=np.array(self._rhs, dtype=np.float64),
            senses=np.array(self._senses, dtype=np.int64),
            big_m=self.big_m,
            names=tuple(self._names[k] for k in order),
        )
        return model, position
