from __future__ import annotations

import logging
from pathlib import Path
from typing_extensions import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .model import MilpModel

logger = logging.getLogger(__name__)

_TERMS_PER_LINE = 8


def _number(value: float) -> str:
    return repr(float(value))


def _expression(coefficients: list[tuple[float, str]]) -> list[str]:
    if not coefficients:
        return ["0 x_zero"]
    terms = []
    for position, (coefficient, name) in enumerate(coefficients):
        sign = "-" if coefficient < 0 else "+"
        magnitude = _number(abs(coefficient))
        terms.append(f"{sign} {magnitude} {name}" if position or sign == "-" else f"{magnitude} {name}")
    return [" ".join(terms[k : k + _TERMS_PER_LINE]) for k in range(0, len(terms), _TERMS_PER_LINE)]


def to_lp_text(model: MilpModel) -> str:
    """
    Render `model` in CPLEX LP format: objective, constraint rows, bounds and the binary section, for
    cross-checking against external solvers.
    """

    lines = [f"\\ polytrek model {model.digest()[:16]}", "Minimize"]
    objective = [(c, model.variable_name(k)) for k, c in enumerate(model.objective) if c != 0.0]
    lines += [f" obj: {chunk}" if k == 0 else f"   {chunk}" for k, chunk in enumerate(_expression(objective))]
    lines.append("Subject To")
    matrix = model.matrix
    for row in range(model.n_rows):
        start, end = matrix.indptr[row], matrix.indptr[row + 1]
        coefficients = [(v, model.variable_name(c)) for c, v in zip(matrix.indices[start:end], matrix.data[start:end])]
        relation = "<=" if model.senses[row] == 0 else "="
        chunks = _expression(coefficients)
        chunks[-1] = f"{chunks[-1]} {relation} {_number(model.rhs[row])}"
        lines += [f" c{row}: {chunk}" if k == 0 else f"   {chunk}" for k, chunk in enumerate(chunks)]
    lines.append("Bounds")
    for index in range(model.n_cont):
        lo, hi = model.lower[index], model.upper[index]
        name = model.variable_name(index)
        low = "-inf" if np.isneginf(lo) else _number(lo)
        high = "+inf" if np.isposinf(hi) else _number(hi)
        lines.append(f" {low} <= {name} <= {high}")
    for index in range(model.n_cont, model.n_vars):
        if model.lower[index] == model.upper[index]:
            lines.append(f" {model.variable_name(index)} = {_number(model.lower[index])}")
    if model.n_bin:
        lines.append("Binaries")
        names = [model.variable_name(k) for k in range(model.n_cont, model.n_vars)]
        lines += [" " + " ".join(names[k : k + _TERMS_PER_LINE]) for k in range(0, len(names), _TERMS_PER_LINE)]
    lines.append("End")
    return "\n".join(lines) + "\n"


def dump_model(model: MilpModel, directory: Path, tag: str) -> Path:
    """Write `model` as `<directory>/<tag>.lp` and return the path."""

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{tag}.lp"
    path.write_text(to_lp_text(model))
    logger.debug("wrote %s (%d rows, %d binaries)", path, model.n_rows, model.n_bin)
    return path
