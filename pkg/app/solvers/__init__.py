# solvers package
from .base import (
    ALGORITHMS,
    Criterion,
    RunResult,
    SolverConfig,
    SolverState,
    StepRole,
    Termination,
    TraceRecord,
)
from .rules import RunConstants, check_stop, productivity_test, productivity_threshold, step_size
from .mirror_descent import resolve_max_iter, solve, solve_many_constraints

__all__ = [
    "ALGORITHMS",
    "Criterion",
    "RunConstants",
    "RunResult",
    "SolverConfig",
    "SolverState",
    "StepRole",
    "Termination",
    "TraceRecord",
    "check_stop",
    "productivity_test",
    "productivity_threshold",
    "resolve_max_iter",
    "solve",
    "solve_many_constraints",
    "step_size",
]
