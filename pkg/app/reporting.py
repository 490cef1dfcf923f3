from __future__ import annotations
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union
import json
import logging
import math

import pandas as pd

from .solvers import RunResult, SolverConfig

logger = logging.getLogger(__name__)


def _finite_or_none(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None


@dataclass
class RunRecord:
    """One row of the experiment summary; mirrors the RunResult it serializes."""
    algorithm: int
    criterion: Optional[int]
    eps: float
    delta: float
    modified: bool
    iterations: int
    I: int
    J: int
    estimate: Optional[float]
    feasibility: List[float]
    max_feasibility: Optional[float]
    termination: str
    wall_time_s: float
    gap_oracle: Optional[float] = None
    witness_distance: Optional[float] = None

    @classmethod
    def from_result(cls, result: RunResult, delta: float, wall_time_s: float,
                    gap: Optional[float] = None, witness_distance: Optional[float] = None) -> "RunRecord":
        config = result.config
        return cls(
            algorithm=config.algorithm,
            criterion=int(config.criterion) if config.criterion is not None else None,
            eps=config.eps,
            delta=delta,
            modified=config.many_constraints,
            iterations=result.iterations,
            I=result.I_count,
            J=result.J_count,
            estimate=_finite_or_none(result.certified_bound),
            feasibility=[float(v) for v in result.feasibility],
            max_feasibility=result.max_feasibility,
            termination=str(result.termination.value),
            wall_time_s=round(wall_time_s, 6),
            gap_oracle=gap,
            witness_distance=witness_distance,
        )

    @classmethod
    def failed(cls, config: SolverConfig, delta: float, termination: str, wall_time_s: float,
               iterations: int = 0, I: int = 0, J: int = 0) -> "RunRecord":
        """Record for a run that produced no usable output point."""
        return cls(
            algorithm=config.algorithm,
            criterion=int(config.criterion) if config.criterion is not None else None,
            eps=config.eps,
            delta=delta,
            modified=config.many_constraints,
            iterations=iterations,
            I=I,
            J=J,
            estimate=None,
            feasibility=[],
            max_feasibility=None,
            termination=termination,
            wall_time_s=round(wall_time_s, 6),
        )

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        for key in ("gap_oracle", "witness_distance"):
            if out[key] is None:
                out.pop(key)
        return out


def summary_json(records: Union[RunRecord, Sequence[RunRecord]]) -> str:
    if isinstance(records, RunRecord):
        payload: Any = records.to_dict()
    else:
        payload = [r.to_dict() for r in sorted(records, key=lambda r: r.algorithm)]
    return json.dumps(payload, indent=2)


def write_summary(records: Union[RunRecord, Sequence[RunRecord]], path: Optional[str]) -> str:
    """Write the summary JSON to ``path`` (stdout when None) and return it."""
    text = summary_json(records)
    if path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text + "\n", encoding="utf-8")
        logger.info("write_summary: path=%s", target)
    else:
        print(text)
    return text


def write_trace(result: RunResult, directory: str, name: str) -> Path:
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    path = target / f"{name}.csv"
    frame = result.to_frame()
    frame.to_csv(path, index=False)
    logger.info("write_trace: path=%s rows=%s", path, len(frame))
    return path


def summary_table(records: Sequence[RunRecord]) -> pd.DataFrame:
    """Iterations, time and certified estimate per algorithm, one column each."""
    rows = {
        f"Alg {r.algorithm}": {
            "Iters.": r.iterations,
            "Time": f"{r.wall_time_s:.3f}",
            "Estim.": f"{r.estimate:.3g}" if r.estimate is not None else r.termination,
        }
        for r in sorted(records, key=lambda r: r.algorithm)
    }
    return pd.DataFrame(rows)
