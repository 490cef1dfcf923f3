"""Step sizes, productivity thresholds and stopping criteria of algorithms 1-7."""

from __future__ import annotations
from dataclasses import dataclass
import math

from .base import ALGORITHMS, NORM_FLOOR, Criterion, SolverState, StepRole
from ..errors import ConfigurationError, DegenerateOperatorError

# algorithms whose productivity threshold is eps * M_g
SCALED_THRESHOLD = (3, 5)


@dataclass(frozen=True)
class RunConstants:
    eps: float
    L_F: float
    M_g: float
    D: float
    R2: float
    theta: float
    delta: float = 0.0

    @classmethod
    def for_problem(cls, problem, eps: float, delta: float) -> "RunConstants":
        feasible = problem.geometry.set
        return cls(
            eps=eps,
            L_F=problem.operator.bound,
            M_g=problem.constraints.M_g,
            D=feasible.D,
            R2=feasible.R2,
            theta=math.sqrt(feasible.theta2),
            delta=delta,
        )


def _check_algorithm(algorithm: int) -> None:
    if algorithm not in ALGORITHMS:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}")


def productivity_threshold(algorithm: int, eps: float, M_g: float) -> float:
    _check_algorithm(algorithm)
    return eps * M_g if algorithm in SCALED_THRESHOLD else eps


def productivity_test(algorithm: int, eps: float, M_g: float, g_value: float) -> bool:
    """True when step k is productive; the boundary counts as productive."""
    return bool(g_value <= productivity_threshold(algorithm, eps, M_g))


def step_size(
    algorithm: int,
    role: StepRole,
    eps: float,
    L_F: float,
    M_g: float,
    theta: float,
    current_norm: float,
    sum_M2: float,
) -> float:
    """
    Step size h_k for the given algorithm and step role.

    ``current_norm`` is |F(x_k)|_* on productive steps and |grad g(x_k)|_* on
    non-productive ones. ``sum_M2`` is the sum of M_t^2 for t <= k, used by
    algorithm 7 only.
    """
    _check_algorithm(algorithm)
    productive = StepRole(role) is StepRole.PRODUCTIVE

    if algorithm == 7:
        root = math.sqrt(sum_M2)
        if root <= NORM_FLOOR:
            raise DegenerateOperatorError(f"algorithm 7 needs sum M_t^2 > 0, got {sum_M2}")
        return theta / root

    if algorithm == 1:
        return eps / L_F ** 2 if productive else eps / M_g ** 2

    norm_dependent = productive or algorithm in (2, 4)
    if norm_dependent and current_norm <= NORM_FLOOR:
        kind = "operator" if productive else "constraint subgradient"
        raise DegenerateOperatorError(f"{kind} norm {current_norm:.3e} is too small for algorithm {algorithm}")

    if productive:
        if algorithm in (2, 3):
            return eps / current_norm ** 2
        if algorithm in (4, 5):
            return eps / current_norm
        return eps / (M_g * current_norm)

    if algorithm in (2, 4):
        return eps / current_norm ** 2
    if algorithm in (3, 5):
        return eps / M_g
    return eps / M_g ** 2


def check_stop(algorithm: int, criterion: Criterion, state: SolverState, c: RunConstants) -> bool:
    """Evaluate the stopping inequality after ``state.k`` completed steps."""
    _check_algorithm(algorithm)
    if state.k == 0:
        return False
    first = Criterion(criterion) is Criterion.ONE
    I, J, e = state.I_count, state.J_count, c.eps

    if algorithm == 7:
        rhs = 2.0 * c.theta / e * math.sqrt(state.sum_M2)
        if first:
            rhs += J * c.M_g * c.D / e
        return state.k >= rhs

    if algorithm == 1:
        rhs = e * e * I / (2.0 * c.L_F ** 2) + e * e * J / (2.0 * c.M_g ** 2)
        if first:
            rhs -= e * c.D * J / c.M_g
    elif algorithm == 2:
        rhs = e * e / 2.0 * state.sum_invM2
        if first:
            rhs -= c.M_g * c.D * e * state.sum_invG2
    elif algorithm == 3:
        rhs = e * e / 2.0 * state.sum_invF2 + e * e / 2.0 * J
        if first:
            rhs -= e * c.D * J
    elif algorithm == 4:
        coeff = e * e / 2.0 - (e * c.M_g * c.D if first else 0.0)
        rhs = e * e / 2.0 * I + coeff * state.sum_invG2
    elif algorithm == 5:
        rhs = e * e / 2.0 * (I + J)
        if first:
            rhs -= e * c.D * J
    else:
        rhs = e * e * (I + J) / (2.0 * c.M_g ** 2)
        if first:
            rhs -= e * c.D * J / c.M_g
    return c.R2 <= rhs
