from .big_m import big_m_for
from .branch_and_bound import BranchAndBound, SolveMode
from .builder import MilpBuilder
from .lp_format import dump_model, to_lp_text
from .model import MilpModel, MilpSolution, Sense, Status
from .relaxation import DenseRelaxation, HighsRelaxation, RelaxationEngine, relaxation_engine
from .simplex import DenseSimplex, LpResult
from .solve import solve_lp, solve_milp

__all__ = [
    "BranchAndBound",
    "DenseRelaxation",
    "DenseSimplex",
    "HighsRelaxation",
    "LpResult",
    "MilpBuilder",
    "MilpModel",
    "MilpSolution",
    "RelaxationEngine",
    "Sense",
    "SolveMode",
    "Status",
    "big_m_for",
    "dump_model",
    "relaxation_engine",
    "solve_lp",
    "solve_milp",
    "to_lp_text",
]
