from __future__ import annotations

import threading
from contextlib import contextmanager
from pathlib import Path
from typing_extensions import Any, Iterator, Literal, Optional

from pydantic import Field

from .value_object import ValueObject


class PlannerSettings(ValueObject):
    """
    Process-wide solver and tolerance settings. Operations that accept an explicit `eps` or `settings` argument use
    it in preference to the global instance.
    """

    eps: float = Field(default=1e-7, ge=0.0)
    "Containment tolerance in workspace length units."

    jobs: int = Field(default=1, ge=1)
    "Worker count for the thread pools used by decomposition, patch construction, traversal checks and validation."

    milp_backend: Literal["auto", "builtin", "highs"] = "auto"
    """
    `builtin` runs the in-house branch-and-bound; `highs` hands the whole model to scipy's HiGHS MILP; `auto` uses the
    branch-and-bound for models with at most `builtin_binaries` binaries and HiGHS above that.
    """

    builtin_binaries: int = Field(default=48, ge=0)
    "Largest binary count the `auto` backend gives to the in-house branch-and-bound."

    lp_engine: Literal["auto", "dense", "highs"] = "auto"
    "Relaxation engine used by the in-house branch-and-bound."

    dense_limit: int = Field(default=60_000, ge=0)
    "Largest constraint-matrix size (rows times columns) the `auto` engine sends to the dense simplex."

    debug_dump_dir: Optional[Path] = None
    "When set, every assembled traversal MILP is written there in LP text format."


_lock = threading.Lock()
_current = PlannerSettings()


def get_settings() -> PlannerSettings:
    return _current


def configure(**changes: Any) -> PlannerSettings:
    """
    Replace the global settings with a copy carrying `changes`. The new values are validated.

    Returns:
        PlannerSettings: The new global settings.
    """

    global _current
    with _lock:
        _current = PlannerSettings(**{**_current.model_dump(), **changes})
        return _current


@contextmanager
def override(**changes: Any) -> Iterator[PlannerSettings]:
    """
    Temporarily replace the global settings.

    Example:
        ```
        with override(eps=1e-9, jobs=4):
            decompose(scene, params)
        ```
    """

    global _current
    previous = _current
    try:
        yield configure(**changes)
    finally:
        with _lock:
            _current = previous


def resolve_eps(eps: Optional[float]) -> float:
    return _current.eps if eps is None else eps
