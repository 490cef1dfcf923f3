from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional
import numpy as np
import pandas as pd

from ..errors import ConfigurationError

ALGORITHMS = (1, 2, 3, 4, 5, 6, 7)
NORM_FLOOR = 1e-14


class Criterion(int, Enum):
    ONE = 1
    TWO = 2


class Termination(str, Enum):
    CRITERION1 = "Criterion1"
    CRITERION2 = "Criterion2"
    MAX_ITER = "MaxIter"
    DEGENERATE = "DegenerateOperator"


class StepRole(str, Enum):
    PRODUCTIVE = "productive"
    NONPRODUCTIVE = "nonproductive"


@dataclass(frozen=True)
class SolverConfig:
    """
    Run parameters for one mirror-descent run.

    ``criterion=None`` runs a fixed budget of ``max_iter`` iterations.
    ``max_iter=None`` and ``delta=None`` are resolved against the problem by
    the solver (a multiple of the criterion-2 cap, the operator's declared delta).
    """
    algorithm: int
    criterion: Optional[Criterion] = Criterion.TWO
    eps: float = 0.05
    delta: Optional[float] = None
    max_iter: Optional[int] = None
    many_constraints: bool = False
    trace_every: int = 0
    max_iter_factor: int = 10

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.criterion is not None and not isinstance(self.criterion, Criterion):
            try:
                object.__setattr__(self, "criterion", Criterion(int(self.criterion)))
            except (TypeError, ValueError) as e:
                raise ConfigurationError(f"criterion must be 1 or 2, got {self.criterion!r}") from e
        if not self.eps > 0:
            raise ConfigurationError(f"eps must be positive, got {self.eps}")
        if self.delta is not None and self.delta < 0:
            raise ConfigurationError(f"delta must be nonnegative, got {self.delta}")
        if self.max_iter is not None and self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.criterion is None and self.max_iter is None:
            raise ConfigurationError("a fixed-budget run (criterion=None) needs max_iter")
        if self.trace_every < 0:
            raise ConfigurationError(f"trace_every must be >= 0, got {self.trace_every}")
        if self.max_iter_factor < 1:
            raise ConfigurationError(f"max_iter_factor must be >= 1, got {self.max_iter_factor}")

    @classmethod
    def from_settings(cls, algorithm: int, defaults: Dict[str, Any], **overrides: Any) -> "SolverConfig":
        """Build a config from ``Settings.solver_defaults()`` plus explicit overrides."""
        kwargs = {
            "eps": defaults.get("eps", 0.05),
            "trace_every": defaults.get("trace_every", 0),
            "max_iter_factor": defaults.get("max_iter_factor", 10),
        }
        kwargs.update({k: v for k, v in overrides.items() if v is not None or k == "criterion"})
        return cls(algorithm=algorithm, **kwargs)


@dataclass
class SolverState:
    """Mutable accumulators of one run; I_count + J_count == k at all times."""
    x: np.ndarray
    k: int = 0
    I_count: int = 0
    J_count: int = 0
    sum_wF: float = 0.0
    sum_wFx: Optional[np.ndarray] = None
    sum_x: Optional[np.ndarray] = None
    sum_invM2: float = 0.0
    sum_invG2: float = 0.0
    sum_invF2: float = 0.0
    sum_M2: float = 0.0
    last_weight: Optional[float] = None
    degenerate_steps: int = 0

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=float).copy()
        if self.sum_wFx is None:
            self.sum_wFx = np.zeros_like(self.x)
        if self.sum_x is None:
            self.sum_x = np.zeros_like(self.x)


@dataclass(frozen=True)
class TraceRecord:
    iter: int
    step_type: str
    g_value: float
    norm_used: float
    step_size: float
    x: np.ndarray

    def as_row(self, with_coords: bool) -> Dict[str, Any]:
        row: Dict[str, Any] = {
            "iter": self.iter,
            "step_type": self.step_type,
            "g_value": self.g_value,
            "norm_used": self.norm_used,
            "step_size": self.step_size,
        }
        if with_coords:
            for i, v in enumerate(self.x):
                row[f"x{i}"] = float(v)
        return row


TRACE_COLUMNS = ["iter", "step_type", "g_value", "norm_used", "step_size"]
TRACE_COORD_LIMIT = 4


@dataclass(frozen=True)
class RunResult:
    x_hat: np.ndarray
    I_count: int
    J_count: int
    iterations: int
    termination: Termination
    certified_bound: float
    feasibility: np.ndarray
    state: SolverState
    config: SolverConfig
    trace: List[TraceRecord] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return bool(np.isfinite(self.certified_bound))

    @property
    def max_feasibility(self) -> float:
        return float(np.max(self.feasibility))

    def to_frame(self) -> pd.DataFrame:
        """Trace as a pandas DataFrame; coordinates are included when n <= 4."""
        with_coords = self.x_hat.shape[0] <= TRACE_COORD_LIMIT
        columns = TRACE_COLUMNS + ([f"x{i}" for i in range(self.x_hat.shape[0])] if with_coords else [])
        return pd.DataFrame([r.as_row(with_coords) for r in self.trace], columns=columns)
