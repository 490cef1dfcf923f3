import argparse
import json
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

from .config import ALL_ALGORITHMS, settings
from .certify import distance_to_witness, gap_oracle, MAX_ORACLE_DIM
from .errors import (
  ConfigurationError,
  DimensionError,
  DomainError,
  InconsistentConstraintError,
  MirrorStepError,
  NoProductiveStepsError,
  ProblemSpecError,
)
from .problems import VIProblem, build_problem
from .reporting import RunRecord, summary_table, write_summary, write_trace
from .solvers import SolverConfig, Termination, solve

# Basic logging config (can override with LOG_LEVEL env)
logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_OUTPUT = 3

FORSAKEN_EPS = 0.001
FORSAKEN_BUDGET = 10_000
FORSAKEN_BUDGET_SLOW = 100_000  # algorithm 6 moves much slower on this game


def _algorithm(value: str):
  if value == "all":
    return value
  try:
    alg = int(value)
  except ValueError:
    raise argparse.ArgumentTypeError(f"--alg must be 1..7 or 'all', got {value!r}")
  if alg not in ALL_ALGORITHMS:
    raise argparse.ArgumentTypeError(f"--alg must be 1..7 or 'all', got {value!r}")
  return alg


def _positive_float(value: str) -> float:
  out = float(value)
  if not out > 0:
    raise argparse.ArgumentTypeError(f"expected a positive number, got {value!r}")
  return out


def _nonnegative_float(value: str) -> float:
  out = float(value)
  if out < 0:
    raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {value!r}")
  return out


def _add_run_flags(p: argparse.ArgumentParser, eps_default: float, trace_default: int) -> None:
  p.add_argument("--eps", type=_positive_float, default=eps_default)
  p.add_argument("--delta", type=_nonnegative_float, default=None,
                 help="monotonicity slack added to every certificate")
  p.add_argument("--max-iter", type=int, default=None)
  p.add_argument("--trace-every", type=int, default=trace_default)
  p.add_argument("--trace-dir", default=None, help="directory for per-iteration CSV files")
  p.add_argument("--out", default=None, help="summary JSON path (stdout when omitted)")


def build_parser() -> argparse.ArgumentParser:
  parser = argparse.ArgumentParser(
    prog="python -m app",
    description="Mirror-descent solvers for variational inequalities with functional constraints.",
  )
  sub = parser.add_subparsers(dest="command", required=True)

  hp = sub.add_parser("hphard", help="HpHard operator on the unit ball with random linear constraints")
  hp.add_argument("--n", type=int, default=100)
  hp.add_argument("--m", type=int, default=10)
  hp.add_argument("--seed", type=int, default=settings.VI_DEFAULT_SEED)
  hp.add_argument("--start-radius", type=_nonnegative_float, default=settings.VI_START_RADIUS)
  hp.add_argument("--entry-scale", type=_positive_float, default=None,
                  help="scale of the A and S entries (default 1/sqrt(n); 1.0 for unscaled)")
  hp.add_argument("--alg", type=_algorithm, default="all")
  hp.add_argument("--criterion", type=int, choices=(1, 2), default=1)
  hp.add_argument("--modified", action="store_true", help="step along the first violated constraint")
  hp.add_argument("--verify-gap", action="store_true", help=f"grid gap oracle (n <= {MAX_ORACLE_DIM})")
  _add_run_flags(hp, settings.VI_DEFAULT_EPS, settings.VI_TRACE_EVERY)

  fs = sub.add_parser("forsaken", help="fixed-budget trajectories on the forsaken min-max game")
  fs.add_argument("--alg", type=_algorithm, default=2)
  fs.add_argument("--x0", type=float, default=0.0)
  fs.add_argument("--y0", type=float, default=0.0)
  _add_run_flags(fs, FORSAKEN_EPS, 1)

  cu = sub.add_parser("custom", help="problem read from a JSON problem spec")
  cu.add_argument("problem_json")
  cu.add_argument("--alg", type=_algorithm, default="all")
  cu.add_argument("--criterion", type=int, choices=(1, 2), default=1)
  cu.add_argument("--modified", action="store_true")
  cu.add_argument("--verify-gap", action="store_true")
  _add_run_flags(cu, settings.VI_DEFAULT_EPS, settings.VI_TRACE_EVERY)
  return parser


def _run_one(problem: VIProblem, config: SolverConfig, args: argparse.Namespace) -> Tuple[RunRecord, int]:
  """Run one configuration; failures without an output point become records with exit 3."""
  delta = config.delta if config.delta is not None else problem.operator.delta
  started = time.perf_counter()
  try:
    result = solve(problem, config)
  except NoProductiveStepsError as e:
    logger.error("run: alg=%s %s", config.algorithm, e)
    state = e.state
    return RunRecord.failed(
      config, delta, "NoProductiveSteps", time.perf_counter() - started,
      iterations=state.k if state else 0,
      I=state.I_count if state else 0,
      J=state.J_count if state else 0,
    ), EXIT_NO_OUTPUT
  except InconsistentConstraintError as e:
    logger.error("run: alg=%s %s", config.algorithm, e)
    return RunRecord.failed(config, delta, Termination.DEGENERATE.value,
                            time.perf_counter() - started), EXIT_NO_OUTPUT
  except MirrorStepError as e:
    logger.error("run: alg=%s %s", config.algorithm, e)
    return RunRecord.failed(config, delta, "MirrorStepError",
                            time.perf_counter() - started), EXIT_NO_OUTPUT
  elapsed = time.perf_counter() - started

  gap = None
  if getattr(args, "verify_gap", False):
    value = gap_oracle(problem, result.x_hat, settings.VI_GRID_RESOLUTION)
    gap = value if math.isfinite(value) else None
  witness = distance_to_witness(problem, result.x_hat) if problem.witness is not None else None
  if args.trace_dir and result.trace:
    name = f"{problem.name}_alg{config.algorithm}{'_mod' if config.many_constraints else ''}"
    write_trace(result, args.trace_dir, name)
  return RunRecord.from_result(result, delta, elapsed, gap=gap, witness_distance=witness), EXIT_OK


def _algorithms(problem: VIProblem, requested) -> List[int]:
  if requested != "all":
    return [requested]
  selected = settings.ALGORITHMS
  if 7 in selected and not math.isfinite(problem.geometry.set.theta2):
    logger.warning("run: skipping algorithm 7 on the %s geometry (theta is infinite)",
                   problem.geometry.kind)
    selected = [a for a in selected if a != 7]
  return selected


def run_experiment(problem: VIProblem, args: argparse.Namespace, configs: Sequence[SolverConfig]) -> int:
  if getattr(args, "verify_gap", False) and problem.dim > MAX_ORACLE_DIM:
    raise DimensionError(f"--verify-gap needs n <= {MAX_ORACLE_DIM}, got {problem.dim}")

  if args.alg != "all":
    record, code = _run_one(problem, configs[0], args)
    write_summary(record, args.out)
    return code

  with ThreadPoolExecutor(max_workers=max(1, settings.VI_WORKERS)) as pool:
    outcomes = list(pool.map(lambda c: _run_one(problem, c, args), configs))
  records = [r for r, _ in outcomes]
  logger.info("run: summary\n%s", summary_table(records).to_string())
  write_summary(records, args.out)
  return max(code for _, code in outcomes)


def _solver_configs(problem: VIProblem, args: argparse.Namespace) -> List[SolverConfig]:
  defaults = settings.solver_defaults()
  return [
    SolverConfig.from_settings(
      alg, defaults,
      criterion=args.criterion,
      eps=args.eps,
      delta=args.delta,
      max_iter=args.max_iter,
      many_constraints=args.modified,
      trace_every=args.trace_every,
    )
    for alg in _algorithms(problem, args.alg)
  ]


def cmd_hphard(args: argparse.Namespace) -> int:
  problem = build_problem({
    "kind": "hphard",
    "n": args.n,
    "m": args.m,
    "seed": args.seed,
    "start_radius": args.start_radius,
    "entry_scale": args.entry_scale,
  })
  return run_experiment(problem, args, _solver_configs(problem, args))


def cmd_forsaken(args: argparse.Namespace) -> int:
  if args.alg == "all":
    raise ConfigurationError("forsaken runs one algorithm at a time")
  problem = build_problem({"kind": "forsaken", "start": [args.x0, args.y0]})
  budget = args.max_iter or (FORSAKEN_BUDGET_SLOW if args.alg == 6 else FORSAKEN_BUDGET)
  config = SolverConfig(
    algorithm=args.alg,
    criterion=None,
    eps=args.eps,
    delta=args.delta,
    max_iter=budget,
    trace_every=args.trace_every,
  )
  if not args.trace_dir:
    args.trace_dir = settings.VI_OUTPUT_DIR
  return run_experiment(problem, args, [config])


def cmd_custom(args: argparse.Namespace) -> int:
  try:
    with open(args.problem_json, encoding="utf-8") as fh:
      spec = json.load(fh)
  except OSError as e:
    raise ProblemSpecError(f"cannot read {args.problem_json}: {e}") from e
  except json.JSONDecodeError as e:
    raise ProblemSpecError(f"{args.problem_json} is not valid JSON: {e}") from e
  problem = build_problem(spec)
  return run_experiment(problem, args, _solver_configs(problem, args))


COMMANDS = {
  "hphard": cmd_hphard,
  "forsaken": cmd_forsaken,
  "custom": cmd_custom,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
  parser = build_parser()
  try:
    args = parser.parse_args(argv)
  except SystemExit as e:
    return EXIT_OK if e.code in (0, None) else EXIT_USAGE
  try:
    return COMMANDS[args.command](args)
  except (ProblemSpecError, ConfigurationError, DimensionError, DomainError) as e:
    logger.error("%s: %s", args.command, e)
    return EXIT_USAGE


if __name__ == "__main__":
  sys.exit(main())
