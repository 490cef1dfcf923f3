"""Brute-force checks of a solver output on small instances."""

from __future__ import annotations
from typing import Optional
import logging
import numpy as np

from ..errors import DimensionError, MissingWitnessError
from ..problems import VIProblem

logger = logging.getLogger(__name__)

MAX_ORACLE_DIM = 3


def gap_oracle(problem: VIProblem, x_hat: np.ndarray, grid_resolution: int = 400) -> float:
    """max <F(x), x_hat - x> over grid points x of Q with g(x) <= 0.

    Returns -inf when no grid point is feasible.
    """
    geom = problem.geometry
    if geom.dim > MAX_ORACLE_DIM:
        raise DimensionError(f"gap_oracle supports dimension <= {MAX_ORACLE_DIM}, got {geom.dim}")
    if grid_resolution < 2:
        raise ValueError(f"grid_resolution must be >= 2, got {grid_resolution}")
    x_hat = np.asarray(x_hat, dtype=float)

    best = -np.inf
    feasible_points = 0
    for chunk in geom.grid(grid_resolution):
        mask = geom.contains_batch(chunk)
        if not np.any(mask):
            continue
        points = chunk[mask]
        g = problem.constraints.values_batch(points)
        points = points[np.max(g, axis=1) <= 0.0]
        if points.shape[0] == 0:
            continue
        feasible_points += points.shape[0]
        values = np.einsum("ij,ij->i", problem.operator.evaluate_batch(points), x_hat - points)
        best = max(best, float(np.max(values)))

    logger.info("gap_oracle: problem=%s resolution=%s points=%s gap=%.6g",
                problem.name, grid_resolution, feasible_points, best)
    return best


def distance_to_witness(problem: VIProblem, x_hat: np.ndarray,
                        witness: Optional[np.ndarray] = None) -> float:
    """Primal-norm distance from x_hat to the problem's stored solution."""
    target = witness if witness is not None else problem.witness
    if target is None:
        raise MissingWitnessError(f"problem {problem.name!r} has no witness solution")
    return float(problem.geometry.norms.primal(np.asarray(x_hat, dtype=float) - np.asarray(target)))
