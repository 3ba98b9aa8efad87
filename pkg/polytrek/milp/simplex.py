from __future__ import annotations

import logging
from typing_extensions import NamedTuple, Optional

import numpy as np

from ..errors import NumericalFailure, Unbounded

logger = logging.getLogger(__name__)

_PIVOT_TOL = 1e-9
_COST_TOL = 1e-9
_FEAS_TOL = 1e-7
_BLAND_AFTER = 1000


class LpResult(NamedTuple):
    feasible: bool
    x: Optional[np.ndarray]
    fun: Optional[float]


class DenseSimplex:
    """
    Dense two-phase tableau simplex for `min c.x  s.t.  A_ub x <= b_ub, A_eq x = b_eq, lower <= x <= upper`.

    Entering columns are chosen by most negative reduced cost; after 1000 consecutive degenerate pivots the rule
    switches to Bland's lowest-index rule for the rest of the phase, which rules out cycling. Fixed variables
    (lower == upper) are substituted out before the tableau is built, so branch-and-bound nodes shrink as binaries
    get fixed.
    """

    def __init__(self, max_iterations: Optional[int] = None):
        self.max_iterations = max_iterations

    def solve(
        self,
        c: np.ndarray,
        A_ub: np.ndarray,
        b_ub: np.ndarray,
        A_eq: np.ndarray,
        b_eq: np.ndarray,
        lower: np.ndarray,
        upper: np.ndarray,
    ) -> LpResult:
        """
        Raises:
            Unbounded: The objective decreases without bound.
            NumericalFailure: The pivot budget is exhausted or a pivot is numerically unusable.
        """

        shift, transform, extra_ub, extra_rhs = _standardize(lower, upper)
        if shift is None:
            return LpResult(False, None, None)

        # Substitute x = shift + transform y
        Aub = np.vstack([A_ub @ transform, extra_ub]) if A_ub.shape[0] else extra_ub
        bub = np.concatenate([b_ub - A_ub @ shift, extra_rhs]) if A_ub.shape[0] else extra_rhs
        Aeq = A_eq @ transform if A_eq.shape[0] else np.zeros((0, transform.shape[1]))
        beq = b_eq - A_eq @ shift if A_eq.shape[0] else np.zeros(0)
        cost = c @ transform
        constant = float(c @ shift)

        if transform.shape[1] == 0:
            # Every variable is fixed
            feasible = np.all(bub >= -_FEAS_TOL) and np.all(np.abs(beq) <= _FEAS_TOL)
            return LpResult(bool(feasible), shift.copy() if feasible else None, constant if feasible else None)

        y = self._solve_standard(cost, Aub, bub, Aeq, beq)
        if y is None:
            return LpResult(False, None, None)
        x = shift + transform @ y
        return LpResult(True, x, float(c @ x))

    def _solve_standard(
        self, cost: np.ndarray, Aub: np.ndarray, bub: np.ndarray, Aeq: np.ndarray, beq: np.ndarray
    ) -> Optional[np.ndarray]:
        m_ub, ny = Aub.shape
        m_eq = Aeq.shape[0]
        m = m_ub + m_eq

        A = np.zeros((m, ny + m_ub))
        A[:m_ub, :ny] = Aub
        A[:m_ub, ny:] = np.eye(m_ub)
        A[m_ub:, :ny] = Aeq
        rhs = np.concatenate([bub, beq])
        negative = rhs < 0
        A[negative] *= -1.0
        rhs[negative] *= -1.0

        # Slack columns start basic where their coefficient stayed +1, artificials cover the remaining rows
        slack_basic = np.zeros(m, dtype=bool)
        slack_basic[:m_ub] = ~negative[:m_ub]
        artificial_rows = np.flatnonzero(~slack_basic)
        n_art = artificial_rows.shape[0]
        n_struct = ny + m_ub
        tableau = np.zeros((m + 1, n_struct + n_art + 1))
        tableau[:m, :n_struct] = A
        tableau[artificial_rows, n_struct + np.arange(n_art)] = 1.0
        tableau[:m, -1] = rhs
        basis = np.where(slack_basic, ny + np.arange(m), -1)
        basis[artificial_rows] = n_struct + np.arange(n_art)

        if n_art:
            tableau[m, :] = 0.0
            tableau[m, :n_struct] = -tableau[artificial_rows, :n_struct].sum(axis=0)
            tableau[m, -1] = -tableau[artificial_rows, -1].sum()
            self._iterate(tableau, basis, n_struct + n_art, phase=1)
            if -tableau[m, -1] > _FEAS_TOL * (1.0 + np.abs(rhs).max(initial=0.0)):
                return None
            tableau, basis = _drive_out_artificials(tableau, basis, n_struct)

        # Phase 2 over structural columns only
        tableau = np.hstack([tableau[:, :n_struct], tableau[:, -1:]])
        full_cost = np.concatenate([cost, np.zeros(m_ub)])
        rows = tableau.shape[0] - 1
        tableau[rows, :n_struct] = full_cost
        tableau[rows, -1] = 0.0
        for row in range(rows):
            weight = full_cost[basis[row]]
            if weight != 0.0:
                tableau[rows] -= weight * tableau[row]
        self._iterate(tableau, basis, n_struct, phase=2)

        values = np.zeros(n_struct)
        values[basis] = tableau[:rows, -1]
        return np.maximum(values[:ny], 0.0)

    def _iterate(self, tableau: np.ndarray, basis: np.ndarray, n_cols: int, phase: int) -> None:
        rows = tableau.shape[0] - 1
        limit = self.max_iterations or 50 * (rows + n_cols) + 1000
        degenerate = 0
        bland = False
        for _ in range(limit):
            reduced = tableau[rows, :n_cols]
            candidates = np.flatnonzero(reduced < -_COST_TOL)
            if candidates.shape[0] == 0:
                return
            entering = int(candidates[0]) if bland else int(candidates[np.argmin(reduced[candidates])])
            column = tableau[:rows, entering]
            positive = column > _PIVOT_TOL
            if not np.any(positive):
                if phase == 1:
                    raise NumericalFailure("phase 1 reported an unbounded direction")
                raise Unbounded("the LP objective is unbounded below")
            ratios = np.full(rows, np.inf)
            ratios[positive] = tableau[:rows, -1][positive] / column[positive]
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + 1e-12)
            leaving = int(ties[np.argmin(basis[ties])])
            if best <= 1e-12:
                degenerate += 1
                if degenerate >= _BLAND_AFTER and not bland:
                    logger.debug("switching to Bland's rule after %d degenerate pivots", degenerate)
                    bland = True
            else:
                degenerate = 0
            _pivot(tableau, leaving, entering)
            basis[leaving] = entering
        raise NumericalFailure(f"simplex phase {phase} exceeded {limit} pivots")


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    pivot = tableau[row, col]
    if abs(pivot) < 1e-12:
        raise NumericalFailure(f"pivot element {pivot:.3e} below tolerance")
    tableau[row] /= pivot
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def _drive_out_artificials(tableau: np.ndarray, basis: np.ndarray, n_struct: int) -> tuple[np.ndarray, np.ndarray]:
    rows = tableau.shape[0] - 1
    redundant = []
    for row in range(rows):
        if basis[row] < n_struct:
            continue
        candidates = np.flatnonzero(np.abs(tableau[row, :n_struct]) > _PIVOT_TOL)
        if candidates.shape[0] == 0:
            redundant.append(row)
            continue
        entering = int(candidates[0])
        _pivot(tableau, row, entering)
        basis[row] = entering
    if redundant:
        keep = np.array([r for r in range(rows + 1) if r not in set(redundant)])
        tableau = tableau[keep]
        basis = basis[keep[:-1]]
    return tableau, basis


def _standardize(
    lower: np.ndarray, upper: np.ndarray
) -> tuple[Optional[np.ndarray], np.ndarray, np.ndarray, np.ndarray]:
    """
    Express x = shift + transform y with y >= 0, plus extra rows `extra_ub y <= extra_rhs` for finite upper bounds.
    Returns shift None when some lower bound exceeds its upper bound.
    """

    n = lower.shape[0]
    if np.any(lower > upper + 1e-12):
        return None, np.zeros((n, 0)), np.zeros((0, 0)), np.zeros(0)
    columns: list[np.ndarray] = []
    shift = np.zeros(n)
    bounded: list[tuple[int, float]] = []
    for j in range(n):
        lo, hi = lower[j], upper[j]
        unit = np.zeros(n)
        unit[j] = 1.0
        if np.isfinite(lo) and np.isfinite(hi) and hi - lo <= 1e-12:
            shift[j] = lo
        elif np.isfinite(lo):
            shift[j] = lo
            columns.append(unit)
            if np.isfinite(hi):
                bounded.append((len(columns) - 1, hi - lo))
        elif np.isfinite(hi):
            shift[j] = hi
            columns.append(-unit)
        else:
            columns.append(unit)
            columns.append(-unit)
    transform = np.column_stack(columns) if columns else np.zeros((n, 0))
    extra = np.zeros((len(bounded), transform.shape[1]))
    extra_rhs = np.zeros(len(bounded))
    for row, (col, width) in enumerate(bounded):
        extra[row, col] = 1.0
        extra_rhs[row] = width
    return shift, transform, extra, extra_rhs
