from __future__ import annotations
from typing import Optional, Sequence, Tuple
import numpy as np

from ..base import BregmanGeometry, FeasibleSet, NormPair, ProxFunction, MEMBERSHIP_TOL
from ...errors import DomainError


def _l2(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def project_ball(v: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection of v onto the ball B(center, radius)."""
    shift = v - center
    norm = np.linalg.norm(shift)
    if norm <= radius:
        return v.copy()
    return center + shift * (radius / norm)


class EuclideanBallGeometry(BregmanGeometry):
    """psi = 1/2 |x|_2^2 on a Euclidean ball; V(x, y) = 1/2 |x - y|_2^2."""

    kind = "euclidean"

    def __init__(
        self,
        dim: int,
        radius: float = 1.0,
        center: Optional[Sequence[float]] = None,
        start: Optional[Sequence[float]] = None,
    ) -> None:
        if dim < 1:
            raise DomainError(f"dimension must be >= 1, got {dim}")
        if not radius > 0:
            raise DomainError(f"radius must be positive, got {radius}")
        self.radius = float(radius)
        self.center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        x0 = self.center.copy() if start is None else np.asarray(start, dtype=float)
        if self.center.shape != (dim,) or x0.shape != (dim,):
            raise DomainError("center and start must have the geometry dimension")
        offset = np.linalg.norm(x0 - self.center)
        if offset > self.radius + MEMBERSHIP_TOL:
            raise DomainError(f"start point lies outside the ball (offset {offset:.6g})")

        norms = NormPair(primal=_l2, dual=_l2)
        prox = ProxFunction(
            value=lambda x: 0.5 * float(np.dot(x, x)),
            gradient=lambda x: np.asarray(x, dtype=float),
            sigma=1.0,
        )
        feasible = FeasibleSet(
            contains=self._contains,
            distance=self._distance,
            D=2.0 * self.radius,
            R2=0.5 * (self.radius + offset) ** 2,
            theta2=2.0 * self.radius ** 2,
            x0=x0,
        )
        super().__init__(norms, prox, feasible)

    def _distance(self, x: np.ndarray) -> float:
        return max(float(np.linalg.norm(x - self.center)) - self.radius, 0.0)

    def _contains(self, x: np.ndarray) -> bool:
        return self._distance(x) <= MEMBERSHIP_TOL

    def divergence(self, x: np.ndarray, y: np.ndarray) -> float:
        diff = np.asarray(x) - np.asarray(y)
        return 0.5 * float(np.dot(diff, diff))

    def mirror(self, x: np.ndarray, p: np.ndarray, h: float) -> np.ndarray:
        return project_ball(x - h * p, self.center, self.radius)

    def contains_batch(self, points: np.ndarray) -> np.ndarray:
        dist = np.linalg.norm(points - self.center, axis=1)
        return dist <= self.radius + MEMBERSHIP_TOL

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.center - self.radius, self.center + self.radius

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        directions = rng.standard_normal((count, self.dim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = self.radius * rng.random(count) ** (1.0 / self.dim)
        return self.center + directions * radii[:, None]
