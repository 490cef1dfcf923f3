"""Adapters turning the classical special cases of a VI into an OperatorSpec."""

from __future__ import annotations
from typing import Callable
import numpy as np

from .base import OperatorSpec, Point


def wrap_minimization(f_subgrad: Callable[[Point], np.ndarray], bound: float,
                      delta: float = 0.0) -> OperatorSpec:
    return OperatorSpec(evaluate=f_subgrad, bound=bound, delta=delta)


def wrap_saddle(grad_u: Callable[[Point, Point], np.ndarray],
                grad_v: Callable[[Point, Point], np.ndarray],
                n_u: int, bound: float, delta: float = 0.0) -> OperatorSpec:
    """min_u max_v f(u, v): F(u, v) = (grad_u f, -grad_v f) on z = (u, v)."""

    def evaluate(z: Point) -> np.ndarray:
        u, v = z[:n_u], z[n_u:]
        return np.concatenate([np.asarray(grad_u(u, v), dtype=float),
                               -np.asarray(grad_v(u, v), dtype=float)])

    return OperatorSpec(evaluate=evaluate, bound=bound, delta=delta)


def wrap_fixed_point(T: Callable[[Point], np.ndarray], bound: float,
                     delta: float = 0.0) -> OperatorSpec:
    # zeros of F are the fixed points of T
    return OperatorSpec(
        evaluate=lambda x: np.asarray(x, dtype=float) - np.asarray(T(x), dtype=float),
        bound=bound,
        delta=delta,
    )
