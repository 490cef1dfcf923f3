from __future__ import annotations
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Iterator, Tuple
import logging
import numpy as np

from ..errors import DomainError, MirrorStepError

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-9
OPTIMALITY_TOL = 1e-8
DESCENT_TOL = 1e-8


@dataclass(frozen=True)
class NormPair:
    primal: Callable[[np.ndarray], float]
    dual: Callable[[np.ndarray], float]


@dataclass(frozen=True)
class ProxFunction:
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    sigma: float


@dataclass(frozen=True)
class FeasibleSet:
    """Compact convex set Q together with the constants the solvers need.

    ``R2`` bounds V(x, x0) over Q, ``theta2`` bounds V(x, y) over all pairs
    and ``D`` is the diameter in the primal norm.
    """
    contains: Callable[[np.ndarray], bool]
    distance: Callable[[np.ndarray], float]
    D: float
    R2: float
    theta2: float
    x0: np.ndarray


class BregmanGeometry(ABC):
    """
    A normed space, a prox function psi and a feasible set Q.

    Implementations must provide the closed-form mirror step and batch
    membership/bounding-box helpers used by the brute-force oracles.
    """

    kind: str = "abstract"

    def __init__(self, norms: NormPair, prox: ProxFunction, feasible: FeasibleSet) -> None:
        self.norms = norms
        self.prox = prox
        self.set = feasible

    @property
    def dim(self) -> int:
        return int(self.set.x0.shape[0])

    @property
    def start(self) -> np.ndarray:
        return self.set.x0.copy()

    def contains(self, x: np.ndarray) -> bool:
        return self.set.contains(np.asarray(x, dtype=float))

    def divergence(self, x: np.ndarray, y: np.ndarray) -> float:
        psi, grad = self.prox.value, self.prox.gradient
        return float(psi(x) - psi(y) - np.dot(grad(y), x - y))

    @abstractmethod
    def mirror(self, x: np.ndarray, p: np.ndarray, h: float) -> np.ndarray:
        """argmin_{u in Q} <h p, u> + V(u, x), without input validation."""
        raise NotImplementedError

    @abstractmethod
    def contains_batch(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    @abstractmethod
    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw ``count`` points of Q, one per row."""
        raise NotImplementedError

    def grid(self, resolution: int) -> Iterator[np.ndarray]:
        """Regular grid over the bounding box, one slice of the first axis per chunk."""
        lo, hi = self.bounding_box()
        axes = [np.linspace(a, b, resolution) for a, b in zip(lo, hi)]
        for first in axes[0]:
            rest = np.meshgrid(*axes[1:], indexing="ij") if self.dim > 1 else []
            cols = [np.full(rest[0].size if rest else 1, first)] + [r.ravel() for r in rest]
            yield np.column_stack(cols)


def _require_member(geom: BregmanGeometry, x: np.ndarray, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (geom.dim,):
        raise DomainError(f"{name} has shape {x.shape}, expected ({geom.dim},)")
    if not geom.contains(x):
        raise DomainError(
            f"{name} lies outside the feasible set (distance {geom.set.distance(x):.3e})"
        )
    return x


def bregman_divergence(geom: BregmanGeometry, x: np.ndarray, y: np.ndarray) -> float:
    x = _require_member(geom, x, "x")
    y = _require_member(geom, y, "y")
    # V is nonnegative; clip rounding noise around zero
    return max(geom.divergence(x, y), 0.0)


def mirror_step(geom: BregmanGeometry, x: np.ndarray, p: np.ndarray, h: float) -> np.ndarray:
    """Proximal mapping Mirr_x(h p)."""
    x = _require_member(geom, x, "x")
    if not h > 0:
        raise DomainError(f"step size must be positive, got {h}")
    z = geom.mirror(x, np.asarray(p, dtype=float), float(h))
    if not np.all(np.isfinite(z)) or not geom.contains(z):
        raise MirrorStepError(
            f"mirror step left the feasible set (h={h:.3e}, |p|_*={geom.norms.dual(p):.3e})"
        )
    return z


def verify_lemma1(
    geom: BregmanGeometry,
    f_value: Callable[[np.ndarray], float],
    f_subgrad: Callable[[np.ndarray], np.ndarray],
    y: np.ndarray,
    x: np.ndarray,
    h: float,
) -> bool:
    """Check the three-point inequality of one mirror step on a convex f.

    h (f(y) - f(x)) <= h^2/2 |grad f(y)|_*^2 + V(x, y) - V(x, z),
    with z = Mirr_y(h grad f(y)).
    """
    grad = np.asarray(f_subgrad(y), dtype=float)
    z = mirror_step(geom, y, grad, h)
    lhs = h * (f_value(y) - f_value(x))
    rhs = (
        0.5 * h * h * geom.norms.dual(grad) ** 2
        + bregman_divergence(geom, x, y)
        - bregman_divergence(geom, x, z)
    )
    ok = lhs <= rhs + DESCENT_TOL
    if not ok:
        logger.debug("verify_lemma1: violated lhs=%s rhs=%s h=%s", lhs, rhs, h)
    return bool(ok)


def optimality_residual(geom: BregmanGeometry, x: np.ndarray, p: np.ndarray, h: float,
                        z: np.ndarray, u: np.ndarray) -> float:
    """<h p + grad psi(z) - grad psi(x), u - z>; nonnegative at the exact minimizer."""
    grad = geom.prox.gradient
    return float(np.dot(h * np.asarray(p) + grad(z) - grad(x), np.asarray(u) - z))
