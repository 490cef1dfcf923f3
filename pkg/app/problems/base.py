from __future__ import annotations
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Tuple
import logging
import numpy as np

from ..geometry import BregmanGeometry
from ..errors import ProblemSpecError

logger = logging.getLogger(__name__)

Point = np.ndarray
Covector = np.ndarray


@dataclass(frozen=True)
class OperatorSpec:
    """Operator F: Q -> E* with a declared bound L_F and monotonicity slack delta."""
    evaluate: Callable[[Point], Covector]
    bound: float
    delta: float = 0.0
    batch: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self) -> None:
        if not self.bound > 0:
            raise ProblemSpecError(f"operator bound L_F must be positive, got {self.bound}")
        if self.delta < 0:
            raise ProblemSpecError(f"delta must be nonnegative, got {self.delta}")

    def __call__(self, x: Point) -> Covector:
        return np.asarray(self.evaluate(x), dtype=float)

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        if self.batch is not None:
            return np.asarray(self.batch(points), dtype=float)
        return np.array([self(x) for x in points])

    def with_delta(self, delta: float) -> "OperatorSpec":
        return replace(self, delta=float(delta))


class ConstraintFamily(ABC):
    """
    Convex constraints g_i(x) <= 0, i = 0..m-1, with Lipschitz constants M_gi.

    Subclasses override ``value``/``subgradient`` and may vectorize ``values``.
    """

    def __init__(self, lipschitz: Sequence[float]) -> None:
        lip = np.asarray(lipschitz, dtype=float)
        if lip.ndim != 1 or lip.size == 0:
            raise ProblemSpecError("a constraint family needs at least one constraint")
        if np.any(lip <= 0):
            raise ProblemSpecError("Lipschitz constants must be positive")
        self.lipschitz = lip

    @property
    def m(self) -> int:
        return int(self.lipschitz.size)

    @property
    def M_g(self) -> float:
        return float(np.max(self.lipschitz))

    @abstractmethod
    def value(self, i: int, x: Point) -> float:
        raise NotImplementedError

    @abstractmethod
    def subgradient(self, i: int, x: Point) -> Covector:
        raise NotImplementedError

    def values(self, x: Point) -> np.ndarray:
        return np.array([self.value(i, x) for i in range(self.m)])

    def values_batch(self, points: np.ndarray) -> np.ndarray:
        return np.array([self.values(x) for x in points])

    def first_violation(self, x: Point, threshold: float) -> Tuple[Optional[int], float]:
        """Lowest index with g_i(x) > threshold, or (None, max_i g_i(x)).

        Constraints are evaluated in index order and the scan stops at the
        first violation.
        """
        best = -np.inf
        for i in range(self.m):
            v = self.value(i, x)
            if v > threshold:
                return i, v
            best = max(best, v)
        return None, float(best)

    @staticmethod
    def inactive(n: int) -> "CallableConstraints":
        """A single constant constraint g = -1; every point is strictly feasible."""
        zero = np.zeros(n)
        return CallableConstraints(
            values=[lambda x: -1.0],
            subgradients=[lambda x: zero.copy()],
            lipschitz=[1.0],
        )


class CallableConstraints(ConstraintFamily):
    def __init__(
        self,
        values: Sequence[Callable[[Point], float]],
        subgradients: Sequence[Callable[[Point], Covector]],
        lipschitz: Sequence[float],
    ) -> None:
        if not (len(values) == len(subgradients) == len(lipschitz)):
            raise ProblemSpecError("values, subgradients and lipschitz must have equal length")
        super().__init__(lipschitz)
        self._values = list(values)
        self._subgradients = list(subgradients)

    def value(self, i: int, x: Point) -> float:
        return float(self._values[i](x))

    def subgradient(self, i: int, x: Point) -> Covector:
        return np.asarray(self._subgradients[i](x), dtype=float)


@dataclass(frozen=True, eq=False)
class VIProblem:
    geometry: BregmanGeometry
    operator: OperatorSpec
    constraints: ConstraintFamily
    witness: Optional[Point] = None
    name: str = "custom"
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.geometry.dim

    def with_constraints(self, constraints: ConstraintFamily) -> "VIProblem":
        return replace(self, constraints=constraints)

    def with_delta(self, delta: float) -> "VIProblem":
        return replace(self, operator=self.operator.with_delta(delta))


def eval_constraint_max(c: ConstraintFamily, x: Point) -> Tuple[float, int]:
    """g(x) = max_i g_i(x) and the smallest index attaining it."""
    vals = c.values(x)
    idx = int(np.argmax(vals))  # argmax returns the first occurrence
    return float(vals[idx]), idx


def subgradient_of_max(c: ConstraintFamily, x: Point) -> Covector:
    _, idx = eval_constraint_max(c, x)
    return c.subgradient(idx, x)


@dataclass(frozen=True)
class OperatorReport:
    min_monotonicity: float
    max_norm: float
    declared_delta: float
    declared_bound: float

    @property
    def monotone_ok(self) -> bool:
        return self.min_monotonicity >= -self.declared_delta - 1e-10

    @property
    def bounded_ok(self) -> bool:
        return self.max_norm <= self.declared_bound + 1e-8


def check_operator(problem: VIProblem, samples: int = 1000, seed: int = 0) -> OperatorReport:
    """Sample pairs in Q and measure the delta-monotonicity slack and the operator bound."""
    rng = np.random.default_rng(seed)
    geom, F = problem.geometry, problem.operator
    xs = geom.sample(rng, samples)
    ys = geom.sample(rng, samples)
    Fx = F.evaluate_batch(xs)
    Fy = F.evaluate_batch(ys)
    inner = np.einsum("ij,ij->i", Fx - Fy, xs - ys)
    max_norm = max(geom.norms.dual(v) for v in Fx)
    report = OperatorReport(
        min_monotonicity=float(np.min(inner)),
        max_norm=float(max_norm),
        declared_delta=F.delta,
        declared_bound=F.bound,
    )
    logger.info(
        "check_operator: problem=%s min_monotonicity=%.3e max_norm=%.6g bound=%.6g",
        problem.name, report.min_monotonicity, report.max_norm, F.bound,
    )
    return report
