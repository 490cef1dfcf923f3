from __future__ import annotations
from typing import Sequence
import math
import numpy as np

from .base import CallableConstraints, OperatorSpec, VIProblem
from ..geometry import EuclideanBallGeometry

# Reported equilibrium of the game (approximate)
FORSAKEN_REFERENCE = (0.08, 0.4)


def h(t):
    return t ** 2 / 4.0 - t ** 4 / 2.0 + t ** 6 / 6.0


def h_prime(t):
    return t / 2.0 - 2.0 * t ** 3 + t ** 5


def forsaken_objective(z: np.ndarray) -> float:
    """f(x, y) = x (y - 0.45) + h(x) - h(y); x minimizes, y maximizes."""
    x, y = z
    return float(x * (y - 0.45) + h(x) - h(y))


def forsaken_operator(z: np.ndarray) -> np.ndarray:
    x, y = z
    return np.array([y - 0.45 + h_prime(x), h_prime(y) - x])


def _forsaken_batch(Z: np.ndarray) -> np.ndarray:
    x, y = Z[:, 0], Z[:, 1]
    return np.column_stack([y - 0.45 + h_prime(x), h_prime(y) - x])


def max_abs_h_prime(radius: float) -> float:
    """max |h'(t)| over [-radius, radius], from the critical points of h'."""
    # h''(t) = 5 t^4 - 6 t^2 + 1/2
    candidates = [radius]
    for root in np.roots([5.0, 0.0, -6.0, 0.0, 0.5]):
        if abs(root.imag) < 1e-12 and abs(root.real) <= radius:
            candidates.append(abs(root.real))
    return max(abs(h_prime(t)) for t in candidates)


def forsaken_problem(start: Sequence[float] = (0.0, 0.0), radius: float = 1.2,
                     delta: float = 0.0) -> VIProblem:
    """Forsaken min-max game with the ellipse constraint x^2 + 4 y^2 <= 1.

    The operator is not monotone; ``delta`` is whatever slack the caller assumes.

    The declared L_F bounds each component of F separately over the square
    [-radius, radius]^2 and combines them, so it is an upper bound on
    sup |F|_2 over the ball rather than the supremum itself. Certificates
    stay valid but are looser than with the exact value.
    """
    hp = max_abs_h_prime(radius)
    # |F_1| <= |y| + 0.45 + |h'(x)|, |F_2| <= |h'(y)| + |x|
    L_F = math.hypot(radius + 0.45 + hp, hp + radius)
    operator = OperatorSpec(
        evaluate=forsaken_operator,
        bound=L_F,
        delta=delta,
        batch=_forsaken_batch,
    )
    ellipse = CallableConstraints(
        values=[lambda z: z[0] ** 2 + 4.0 * z[1] ** 2 - 1.0],
        subgradients=[lambda z: np.array([2.0 * z[0], 8.0 * z[1]])],
        # sup of |(2x, 8y)|_2 over the ball is attained at (0, radius)
        lipschitz=[8.0 * radius],
    )
    return VIProblem(
        geometry=EuclideanBallGeometry(2, radius=radius, start=start),
        operator=operator,
        constraints=ellipse,
        witness=np.array(FORSAKEN_REFERENCE),
        name="forsaken",
    )
