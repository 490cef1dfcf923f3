from __future__ import annotations
from dataclasses import replace
from typing import Callable, List, Optional, Tuple
import logging
import math
import numpy as np

from .base import (
    NORM_FLOOR,
    Criterion,
    RunResult,
    SolverConfig,
    SolverState,
    StepRole,
    Termination,
    TraceRecord,
)
from .rules import RunConstants, check_stop, productivity_threshold, step_size
from ..certify.bounds import certificate, iteration_cap
from ..errors import ConfigurationError, InconsistentConstraintError, NoProductiveStepsError
from ..geometry import mirror_step
from ..problems import VIProblem, eval_constraint_max

logger = logging.getLogger(__name__)

# (x, threshold) -> (index of the constraint to step along or None, g value reported)
Selector = Callable[[np.ndarray, float], Tuple[Optional[int], float]]


def _argmax_selector(problem: VIProblem) -> Selector:
    constraints = problem.constraints

    def select(x: np.ndarray, threshold: float) -> Tuple[Optional[int], float]:
        g, idx = eval_constraint_max(constraints, x)
        return (None, g) if g <= threshold else (idx, g)

    return select


def _first_violation_selector(problem: VIProblem) -> Selector:
    return problem.constraints.first_violation


def resolve_max_iter(problem: VIProblem, config: SolverConfig) -> int:
    if config.max_iter is not None:
        return config.max_iter
    feasible = problem.geometry.set
    cap = iteration_cap(config.algorithm, feasible.R2, problem.operator.bound,
                        problem.constraints.M_g, config.eps, feasible.theta2)
    return config.max_iter_factor * cap


def _run(problem: VIProblem, config: SolverConfig, select: Selector) -> RunResult:
    alg, eps = config.algorithm, config.eps
    geom, F, constraints = problem.geometry, problem.operator, problem.constraints
    delta = config.delta if config.delta is not None else F.delta
    consts = RunConstants.for_problem(problem, eps, delta)
    if alg == 7 and not math.isfinite(consts.theta):
        raise ConfigurationError(f"algorithm 7 is not available on the {geom.kind} geometry (theta is infinite)")

    max_iter = resolve_max_iter(problem, config)
    threshold = productivity_threshold(alg, eps, consts.M_g)
    dual = geom.norms.dual
    state = SolverState(x=geom.start)
    trace: List[TraceRecord] = []
    every = config.trace_every

    while True:
        if config.criterion is not None and check_stop(alg, config.criterion, state, consts):
            termination = Termination.CRITERION1 if config.criterion is Criterion.ONE else Termination.CRITERION2
            break
        if state.k >= max_iter:
            termination = Termination.MAX_ITER
            break

        x = state.x
        index, g_value = select(x, threshold)
        if index is None:
            # productive: step along F, the iterate enters the average
            role = StepRole.PRODUCTIVE
            v = F(x)
            norm = dual(v)
            state.sum_M2 += norm * norm
            if alg != 1 and norm <= NORM_FLOOR:
                # stationary point under an adaptive rule: keep it with the last weight
                weight = state.last_weight if state.last_weight is not None else eps / consts.L_F ** 2
                h = math.nan
                x_next = x
                inv = weight / eps
                if state.degenerate_steps == 0:
                    logger.warning("solve: degenerate operator norm=%.3e at k=%s alg=%s", norm, state.k, alg)
                state.degenerate_steps += 1
            else:
                h = step_size(alg, role, eps, consts.L_F, consts.M_g, consts.theta, norm, state.sum_M2)
                x_next = mirror_step(geom, x, v, h)
                weight = h
                inv = 1.0 / (norm * norm) if norm > NORM_FLOOR else weight / eps
            state.sum_invF2 += inv
            state.sum_invM2 += inv
            state.I_count += 1
            state.sum_wF += weight
            state.sum_wFx += weight * x
            state.sum_x += x
            state.last_weight = weight
        else:
            # non-productive: step along the selected constraint only
            role = StepRole.NONPRODUCTIVE
            v = constraints.subgradient(index, x)
            norm = dual(v)
            if norm <= NORM_FLOOR:
                raise InconsistentConstraintError(
                    f"constraint {index} has a zero subgradient at k={state.k} with g={g_value:.3e}"
                )
            state.sum_M2 += norm * norm
            h = step_size(alg, role, eps, consts.L_F, consts.M_g, consts.theta, norm, state.sum_M2)
            x_next = mirror_step(geom, x, v, h)
            inv = 1.0 / (norm * norm)
            state.sum_invG2 += inv
            state.sum_invM2 += inv
            state.J_count += 1

        if every and state.k % every == 0:
            trace.append(TraceRecord(state.k, role.value, g_value, norm, h, x.copy()))
        logger.debug("solve: k=%s role=%s g=%.6g norm=%.6g h=%.6g", state.k, role.value, g_value, norm, h)
        state.x = x_next
        state.k += 1

    if every:
        g_last, _ = eval_constraint_max(constraints, state.x)
        trace.append(TraceRecord(state.k, "final", g_last, math.nan, math.nan, state.x.copy()))

    if state.I_count == 0:
        raise NoProductiveStepsError(
            f"no productive step in {state.k} iterations (alg={alg}, eps={eps})", state=state
        )

    # algorithm 7 uses equal weights
    if alg == 7:
        x_hat = state.sum_x / state.I_count
    else:
        x_hat = state.sum_wFx / state.sum_wF

    result = RunResult(
        x_hat=x_hat,
        I_count=state.I_count,
        J_count=state.J_count,
        iterations=state.k,
        termination=termination,
        certified_bound=math.inf,
        feasibility=constraints.values(x_hat),
        state=state,
        config=config,
        trace=trace,
    )
    cert = certificate(result, problem, config)
    if termination is Termination.MAX_ITER and config.criterion is not None:
        logger.warning("solve: alg=%s hit max_iter=%s without meeting criterion %s",
                       alg, max_iter, int(config.criterion))
    logger.info(
        "solve: alg=%s criterion=%s terminated=%s k=%s I=%s J=%s bound=%.6g",
        alg, config.criterion and int(config.criterion), termination.value, state.k,
        state.I_count, state.J_count, cert.gap_bound,
    )
    return replace(result, certified_bound=cert.gap_bound)


def solve(problem: VIProblem, config: SolverConfig) -> RunResult:
    """Run algorithm ``config.algorithm`` stepping along the most violated constraint.

    Dispatches to ``solve_many_constraints`` when ``config.many_constraints`` is set.
    """
    if config.many_constraints:
        return solve_many_constraints(problem, config)
    return _run(problem, config, _argmax_selector(problem))


def solve_many_constraints(problem: VIProblem, config: SolverConfig) -> RunResult:
    """Step along the lowest-index violated constraint instead of the max."""
    if not config.many_constraints:
        config = replace(config, many_constraints=True)
    return _run(problem, config, _first_violation_selector(problem))
