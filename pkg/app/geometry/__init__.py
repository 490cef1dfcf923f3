# geometry package
# Expose a simple factory to obtain a geometry based on its kind.
from typing import Any, Optional

from .base import (
    BregmanGeometry,
    FeasibleSet,
    NormPair,
    ProxFunction,
    MEMBERSHIP_TOL,
    OPTIMALITY_TOL,
    bregman_divergence,
    mirror_step,
    optimality_residual,
    verify_lemma1,
)
from .euclidean import EuclideanBallGeometry, project_ball
from .entropy import SimplexEntropyGeometry, proj_simplex


def get_geometry(kind: Optional[str], dim: int, **params: Any) -> BregmanGeometry:
    """Return a geometry instance for ``kind``.

    kind can be: 'euclidean' (default; params radius, center, start) or
    'entropy' (probability simplex; param start).
    """
    kind = (kind or "euclidean").lower()

    if kind == "euclidean":
        return EuclideanBallGeometry(dim, **params)
    if kind == "entropy":
        return SimplexEntropyGeometry(dim, **params)

    raise ValueError(f"Unsupported geometry: {kind}")


__all__ = [
    "BregmanGeometry",
    "EuclideanBallGeometry",
    "FeasibleSet",
    "MEMBERSHIP_TOL",
    "NormPair",
    "OPTIMALITY_TOL",
    "ProxFunction",
    "SimplexEntropyGeometry",
    "bregman_divergence",
    "get_geometry",
    "mirror_step",
    "optimality_residual",
    "proj_simplex",
    "project_ball",
    "verify_lemma1",
]
