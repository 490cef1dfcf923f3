from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple
import numpy as np

from .base import ConstraintFamily, Covector, Point
from .rng import SplitMixStream
from ..errors import ProblemSpecError


class LinearConstraints(ConstraintFamily):
    """Affine constraints g_i(x) = <a_i, x> - b_i with M_gi = |a_i|_2 unless given."""

    def __init__(self, a: Sequence[Sequence[float]], b: Sequence[float],
                 lipschitz: Optional[Sequence[float]] = None) -> None:
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.asarray(b, dtype=float).reshape(-1)
        if a.shape[0] != b.shape[0]:
            raise ProblemSpecError(f"a has {a.shape[0]} rows but b has {b.shape[0]} entries")
        super().__init__(np.linalg.norm(a, axis=1) if lipschitz is None else lipschitz)
        self.a = a
        self.b = b

    @property
    def n(self) -> int:
        return int(self.a.shape[1])

    def value(self, i: int, x: Point) -> float:
        return float(np.dot(self.a[i], x) - self.b[i])

    def subgradient(self, i: int, x: Point) -> Covector:
        return self.a[i].copy()

    def values(self, x: Point) -> np.ndarray:
        return self.a @ x - self.b

    def values_batch(self, points: np.ndarray) -> np.ndarray:
        return points @ self.a.T - self.b

    def first_violation(self, x: Point, threshold: float) -> Tuple[Optional[int], float]:
        vals = self.values(x)
        over = np.nonzero(vals > threshold)[0]
        if over.size:
            i = int(over[0])
            return i, float(vals[i])
        return None, float(np.max(vals))


@dataclass(frozen=True)
class LinearConstraintsSpec:
    m: int
    n: int
    seed: int


def generate_linear_constraints(spec: LinearConstraintsSpec) -> LinearConstraints:
    """Entries of a_i and b_i uniform in [0, 1); x = 0 is feasible since b_i >= 0."""
    if spec.m < 1 or spec.n < 1:
        raise ProblemSpecError(f"need m >= 1 and n >= 1, got m={spec.m}, n={spec.n}")
    a = SplitMixStream(spec.seed, "linear.a").uniform((spec.m, spec.n))
    b = SplitMixStream(spec.seed, "linear.b").uniform((spec.m,))
    return LinearConstraints(a, b)
