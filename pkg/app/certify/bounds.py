from __future__ import annotations
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Optional, Sequence, Tuple
import logging
import math
import numpy as np

from ..errors import ConfigurationError

if TYPE_CHECKING:
    from ..problems import VIProblem
    from ..solvers.base import RunResult, SolverConfig

logger = logging.getLogger(__name__)

CERTIFIED_TERMINATIONS = ("Criterion1", "Criterion2")


@dataclass(frozen=True)
class Certificate:
    """Accuracy guarantee for the averaged output x_hat.

    ``gap_bound`` bounds max_{x in Q, g(x) <= 0} <F(x), x_hat - x>;
    ``feasibility_bound`` bounds max_i g_i(x_hat).
    """
    gap_bound: float
    feasibility_bound: float
    algorithm: Optional[int] = None
    criterion: Optional[int] = None
    delta: float = 0.0
    components: Dict[str, float] = field(default_factory=dict)
    certified: bool = True


UNCERTIFIED = Certificate(gap_bound=math.inf, feasibility_bound=math.inf, certified=False)


def _ratio(num: float, den: float) -> float:
    # switching terms vanish with J = 0 even if the denominator does
    if num == 0.0:
        return 0.0
    return num / den if den > 0 else math.inf


def theorem_bound(algorithm: int, criterion: int, I: int, J: int, sum_invF2: float,
                  sum_invG2: float, eps: float, L_F: float, M_g: float, D: float) -> Tuple[float, float]:
    """(accuracy, switching) parts of the gap bound; switching is 0 under criterion 1."""
    if algorithm in (1, 2, 3, 7):
        accuracy = eps
    elif algorithm in (4, 5):
        accuracy = eps * L_F
    elif algorithm == 6:
        accuracy = eps * L_F / M_g
    else:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}")

    if int(criterion) == 1 or J == 0:
        return accuracy, 0.0

    if algorithm == 1:
        switching = _ratio(D * L_F ** 2 * J, M_g * I)
    elif algorithm == 2:
        switching = _ratio(M_g * D * sum_invG2, sum_invF2)
    elif algorithm == 3:
        switching = _ratio(D * J, sum_invF2)
    elif algorithm == 4:
        switching = _ratio(M_g * D * L_F * sum_invG2, I)
    elif algorithm == 5:
        switching = _ratio(D * L_F * J, I)
    elif algorithm == 6:
        switching = _ratio(D * L_F * J, M_g * I)
    else:
        switching = _ratio(J * M_g * D, I)
    return accuracy, switching


def feasibility_bound(algorithm: int, eps: float, M_g: float) -> float:
    return eps * M_g if algorithm in (3, 5) else eps


def certificate(result: "RunResult", problem: "VIProblem", config: "SolverConfig") -> Certificate:
    """Gap bound plus delta for a run stopped by one of its criteria.

    Runs ending by MaxIter, a degenerate operator or a fixed budget get
    ``UNCERTIFIED``.
    """
    if config.criterion is None or result.termination not in CERTIFIED_TERMINATIONS:
        return UNCERTIFIED
    delta = config.delta if config.delta is not None else problem.operator.delta
    state = result.state
    accuracy, switching = theorem_bound(
        config.algorithm, int(config.criterion), state.I_count, state.J_count,
        state.sum_invF2, state.sum_invG2, config.eps, problem.operator.bound,
        problem.constraints.M_g, problem.geometry.set.D,
    )
    return Certificate(
        gap_bound=accuracy + switching + delta,
        feasibility_bound=feasibility_bound(config.algorithm, config.eps, problem.constraints.M_g),
        algorithm=config.algorithm,
        criterion=int(config.criterion),
        delta=delta,
        components={"accuracy": accuracy, "delta": delta, "switching": switching},
        certified=True,
    )


def iteration_cap(algorithm: int, R2: float, L_F: float, M_g: float, eps: float,
                  theta2: float = math.inf) -> int:
    """Upper bound on the iterations criterion 2 needs to fire."""
    if algorithm in (1, 2):
        factor = 2.0 * R2 * max(L_F ** 2, M_g ** 2)
    elif algorithm == 3:
        factor = 2.0 * R2 * max(1.0, L_F ** 2)
    elif algorithm == 4:
        factor = 2.0 * R2 * max(1.0, M_g ** 2)
    elif algorithm == 5:
        factor = 2.0 * R2
    elif algorithm == 6:
        factor = 2.0 * R2 * M_g ** 2
    elif algorithm == 7:
        if not math.isfinite(theta2):
            raise ConfigurationError("algorithm 7 needs a finite theta^2 bound on the divergence")
        factor = 4.0 * theta2 * max(L_F ** 2, M_g ** 2)
    else:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}")
    cap = factor / eps ** 2
    if not math.isfinite(cap):
        raise ConfigurationError(
            f"iteration cap is unbounded for algorithm {algorithm} (R2={R2}, L_F={L_F}, M_g={M_g}, eps={eps})"
        )
    return max(1, int(math.ceil(cap)))


def adaptive_sum_bound(M: Sequence[float]) -> Tuple[float, float]:
    """Both sides of sum_i M_i^2 / sqrt(sum_{t<=i} M_t^2) <= 2 sqrt(sum_i M_i^2)."""
    sq = np.asarray(M, dtype=float) ** 2
    if sq.size == 0 or np.any(sq <= 0):
        raise ValueError("adaptive_sum_bound needs a nonempty sequence of positive values")
    partial = np.cumsum(sq)
    lhs = float(np.sum(sq / np.sqrt(partial)))
    rhs = float(2.0 * np.sqrt(partial[-1]))
    return lhs, rhs
