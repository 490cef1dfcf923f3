from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Tuple
import logging
import math
import numpy as np

from .base import ConstraintFamily, OperatorSpec, VIProblem
from .rng import SplitMixStream
from ..geometry import EuclideanBallGeometry
from ..errors import ProblemSpecError

logger = logging.getLogger(__name__)

POWER_TOL = 1e-6
POWER_MAX_ITER = 1000


@dataclass(frozen=True)
class HpHardSpec:
    """Harker-Pang instance F(x) = Kx + q on the Euclidean unit ball.

    ``entry_scale`` multiplies the uniform [0, 1) entries of A and S. The
    default 1/sqrt(n) gives |K|_2 of order n instead of n^2; 1.0 reproduces
    the unscaled instance.
    ``start_radius`` places the start point at that distance from the origin
    along a seeded direction (0 keeps the center).
    """
    n: int
    seed: int
    q: Optional[Tuple[float, ...]] = None
    entry_scale: Optional[float] = None
    start_radius: float = 0.5


def spectral_norm(K: np.ndarray, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> float:
    """|K|_2 by power iteration on K^T K.

    The estimate is inflated by ``tol`` so that, once converged, it is an
    upper bound on the true norm.
    """
    n = K.shape[1]
    # seeded start; a constant vector can be orthogonal to the top singular vector
    v = 0.5 + SplitMixStream(0, "power.start").uniform((n,))
    v /= np.linalg.norm(v)
    estimate = 0.0
    for it in range(max_iter):
        w = K.T @ (K @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        previous, estimate = estimate, math.sqrt(norm_w)
        if it > 0 and abs(estimate - previous) <= tol * estimate:
            break
    else:
        logger.warning("spectral_norm: power iteration hit %s iterations", max_iter)
    return estimate * (1.0 + tol)


def hphard_matrix(spec: HpHardSpec) -> np.ndarray:
    """K = A A^T + B + C, B = S - S^T skew-symmetric, C diagonal nonnegative."""
    n = spec.n
    if n < 1:
        raise ProblemSpecError(f"HpHard needs n >= 1, got {n}")
    scale = spec.entry_scale if spec.entry_scale is not None else 1.0 / math.sqrt(n)
    A = scale * SplitMixStream(spec.seed, "hphard.A").uniform((n, n))
    S = scale * SplitMixStream(spec.seed, "hphard.S").uniform((n, n))
    c = SplitMixStream(spec.seed, "hphard.C").uniform((n,))
    return A @ A.T + (S - S.T) + np.diag(c)


def _start_point(spec: HpHardSpec) -> np.ndarray:
    if spec.start_radius <= 0:
        return np.zeros(spec.n)
    if spec.start_radius > 1:
        raise ProblemSpecError(f"start_radius must lie in [0, 1], got {spec.start_radius}")
    u = 2.0 * SplitMixStream(spec.seed, "hphard.start").uniform((spec.n,)) - 1.0
    norm = np.linalg.norm(u)
    if norm == 0.0:
        u, norm = np.ones(spec.n), math.sqrt(spec.n)
    return u * (spec.start_radius / norm)


def generate_hphard(spec: HpHardSpec) -> VIProblem:
    """HpHard operator on the unit ball, L_F = |K|_2 + |q|_2.

    The returned problem carries no functional constraints; attach a family
    with ``VIProblem.with_constraints``.
    """
    K = hphard_matrix(spec)
    q = np.zeros(spec.n) if spec.q is None else np.asarray(spec.q, dtype=float)
    if q.shape != (spec.n,):
        raise ProblemSpecError(f"q must have length {spec.n}")
    L_F = spectral_norm(K) + float(np.linalg.norm(q))
    if L_F <= 0:
        raise ProblemSpecError("degenerate HpHard instance with K = 0 and q = 0")

    operator = OperatorSpec(
        evaluate=lambda x: K @ x + q,
        bound=L_F,
        batch=lambda X: X @ K.T + q,
    )
    geometry = EuclideanBallGeometry(spec.n, radius=1.0, start=_start_point(spec))
    witness = np.zeros(spec.n) if not np.any(q) else None
    logger.info("generate_hphard: n=%s seed=%s L_F=%.6g", spec.n, spec.seed, L_F)
    return VIProblem(
        geometry=geometry,
        operator=operator,
        constraints=ConstraintFamily.inactive(spec.n),
        witness=witness,
        name="hphard",
        meta={"K": K, "q": q, "seed": spec.seed},
    )
