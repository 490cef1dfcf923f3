from __future__ import annotations
from typing import Iterator, Optional, Sequence, Tuple
import math
import numpy as np
from scipy.special import kl_div, xlogy

from ..base import BregmanGeometry, FeasibleSet, NormPair, ProxFunction, MEMBERSHIP_TOL
from ...errors import DomainError

LOG_FLOOR = 1e-300


def proj_simplex(v: np.ndarray, s: float = 1.0) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w = s} by sorting (O(n log n))."""
    n = v.shape[0]
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u)
    # number of > 0 components of the solution
    rho = np.nonzero(u * np.arange(1, n + 1) > (cssv - s))[0][-1]
    theta = (cssv[rho] - s) / (rho + 1.0)
    return np.clip(v - theta, 0.0, None)


class SimplexEntropyGeometry(BregmanGeometry):
    """
    Negative entropy psi(x) = sum x_i ln x_i on the probability simplex.

    The prox function is 1-strongly convex with respect to the l1 norm, so the
    dual norm is l_inf, and the Bregman divergence is the KL divergence.
    """

    kind = "entropy"

    def __init__(self, dim: int, start: Optional[Sequence[float]] = None) -> None:
        if dim < 2:
            raise DomainError(f"simplex geometry needs dim >= 2, got {dim}")
        x0 = np.full(dim, 1.0 / dim) if start is None else np.asarray(start, dtype=float)
        if x0.shape != (dim,):
            raise DomainError("start must have the geometry dimension")
        if np.any(x0 <= 0):
            # R2 = -ln(min x0) must be finite
            raise DomainError("start point must lie in the relative interior of the simplex")

        norms = NormPair(
            primal=lambda v: float(np.sum(np.abs(v))),
            dual=lambda v: float(np.max(np.abs(v))),
        )
        prox = ProxFunction(
            value=lambda x: float(np.sum(xlogy(x, x))),
            gradient=lambda x: 1.0 + np.log(np.clip(x, LOG_FLOOR, None)),
            sigma=1.0,
        )
        feasible = FeasibleSet(
            contains=self._contains,
            distance=self._distance,
            D=2.0,
            R2=self._start_radius(x0),
            theta2=math.inf,
            x0=x0,
        )
        super().__init__(norms, prox, feasible)
        if not self.contains(x0):
            raise DomainError("start point is not in the simplex")

    @staticmethod
    def _start_radius(x0: np.ndarray) -> float:
        # max over vertices of KL(e_i || x0) = -ln(min x0)
        return -math.log(float(np.min(x0)))

    def _distance(self, x: np.ndarray) -> float:
        return float(np.sum(np.abs(x - proj_simplex(x))))

    def _contains(self, x: np.ndarray) -> bool:
        return self._distance(x) <= MEMBERSHIP_TOL

    def divergence(self, x: np.ndarray, y: np.ndarray) -> float:
        # kl_div(x, y) = x ln(x/y) - x + y, with 0 ln 0 = 0
        return float(np.sum(kl_div(x, y)))

    def mirror(self, x: np.ndarray, p: np.ndarray, h: float) -> np.ndarray:
        logits = np.log(np.clip(x, LOG_FLOOR, None)) - h * p
        w = np.exp(logits - np.max(logits))
        w = np.clip(w, LOG_FLOOR, None)
        return w / np.sum(w)

    def contains_batch(self, points: np.ndarray) -> np.ndarray:
        nonneg = np.all(points >= -MEMBERSHIP_TOL, axis=1)
        total = np.abs(np.sum(points, axis=1) - 1.0) <= MEMBERSHIP_TOL
        return nonneg & total

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.zeros(self.dim), np.ones(self.dim)

    def grid(self, resolution: int) -> Iterator[np.ndarray]:
        # free coordinates on [0, 1]^(n-1); the last one closes the sum
        axes = [np.linspace(0.0, 1.0, resolution)] * (self.dim - 1)
        for first in axes[0]:
            rest = np.meshgrid(*axes[1:], indexing="ij") if self.dim > 2 else []
            cols = [np.full(rest[0].size if rest else 1, first)] + [r.ravel() for r in rest]
            free = np.column_stack(cols)
            yield np.column_stack([free, 1.0 - free.sum(axis=1)])

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.dirichlet(np.ones(self.dim), size=count)
