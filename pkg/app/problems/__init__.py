# problems package
# Expose a simple factory to build a VIProblem from a JSON problem spec.
from dataclasses import replace
from typing import Any, Dict, Optional
import numpy as np

from .base import (
    CallableConstraints,
    ConstraintFamily,
    OperatorReport,
    OperatorSpec,
    VIProblem,
    check_operator,
    eval_constraint_max,
    subgradient_of_max,
)
from .constraints import LinearConstraints, LinearConstraintsSpec, generate_linear_constraints
from .forsaken import FORSAKEN_REFERENCE, forsaken_objective, forsaken_operator, forsaken_problem
from .hphard import HpHardSpec, generate_hphard, hphard_matrix, spectral_norm
from .rng import SplitMixStream
from .wrappers import wrap_fixed_point, wrap_minimization, wrap_saddle
from ..geometry import get_geometry
from ..errors import ProblemSpecError

PROBLEM_KINDS = ("hphard", "forsaken", "custom")
OPERATOR_TYPES = ("affine", "quadratic", "bilinear", "fixed_point")


def _matrix(spec: Dict[str, Any], key: str, rows: Optional[int] = None,
            cols: Optional[int] = None) -> np.ndarray:
    if key not in spec:
        raise ProblemSpecError(f"operator spec is missing '{key}'")
    try:
        mat = np.atleast_2d(np.asarray(spec[key], dtype=float))
    except (TypeError, ValueError) as e:
        raise ProblemSpecError(f"'{key}' must be a numeric matrix") from e
    if (rows is not None and mat.shape[0] != rows) or (cols is not None and mat.shape[1] != cols):
        raise ProblemSpecError(f"'{key}' has shape {mat.shape}, expected ({rows}, {cols})")
    return mat


def _vector(spec: Dict[str, Any], key: str, n: int) -> np.ndarray:
    raw = spec.get(key)
    if raw is None:
        return np.zeros(n)
    vec = np.asarray(raw, dtype=float).reshape(-1)
    if vec.shape != (n,):
        raise ProblemSpecError(f"'{key}' must have length {n}")
    return vec


def _affine_bound(K: np.ndarray, q: np.ndarray, geom_kind: str, reach: float) -> float:
    if geom_kind == "entropy":
        # |Kx + q|_inf <= max |K_ij| + |q|_inf on the simplex
        return float(np.max(np.abs(K))) + float(np.max(np.abs(q)))
    return spectral_norm(K) * reach + float(np.linalg.norm(q))


def _operator_from_spec(op: Dict[str, Any], n: int, geom_kind: str, reach: float,
                        bound: Optional[float], delta: float) -> OperatorSpec:
    """Build a custom operator; ``reach`` bounds |x|_2 over Q for the default L_F."""
    kind = op.get("type")
    if kind not in OPERATOR_TYPES:
        raise ProblemSpecError(f"operator type must be one of {OPERATOR_TYPES}, got {kind!r}")

    if kind in ("affine", "quadratic"):
        K = _matrix(op, "matrix", n, n)
        q = _vector(op, "offset", n)
        L_F = bound or _affine_bound(K, q, geom_kind, reach) or 1.0
        if kind == "quadratic":
            # gradient of f(x) = 1/2 x^T P x + c^T x; P must be symmetric
            if not np.allclose(K, K.T):
                raise ProblemSpecError("quadratic operator needs a symmetric matrix")
            spec = wrap_minimization(lambda x: K @ x + q, bound=L_F, delta=delta)
        else:
            spec = OperatorSpec(evaluate=lambda x: K @ x + q, bound=L_F, delta=delta)
        return replace(spec, batch=lambda X: X @ K.T + q)

    if kind == "bilinear":
        # f(u, v) = u^T W v
        n_u = int(op.get("n_u", 0))
        if not 0 < n_u < n:
            raise ProblemSpecError("bilinear operator needs 0 < n_u < n")
        W = _matrix(op, "matrix", n_u, n - n_u)
        default_bound = spectral_norm(W) * reach
        return wrap_saddle(lambda u, v: W @ v, lambda u, v: W.T @ u, n_u,
                           bound=bound or default_bound or 1.0, delta=delta)

    # fixed_point: T(x) = M x + t
    M = _matrix(op, "matrix", n, n)
    t = _vector(op, "offset", n)
    default_bound = spectral_norm(np.eye(n) - M) * reach + float(np.linalg.norm(t))
    # F = 0 is bounded by any positive constant
    return wrap_fixed_point(lambda x: M @ x + t, bound=bound or default_bound or 1.0,
                            delta=delta)


def _constraints_from_spec(spec: Optional[Dict[str, Any]], n: int, geom_kind: str) -> ConstraintFamily:
    if not spec:
        return ConstraintFamily.inactive(n)
    a = _matrix(spec, "a", cols=n)
    b = np.asarray(spec.get("b", []), dtype=float).reshape(-1)
    # M_gi in the dual norm: |a_i|_inf on the simplex, |a_i|_2 on a ball
    lipschitz = np.max(np.abs(a), axis=1) if geom_kind == "entropy" else None
    return LinearConstraints(a, b, lipschitz=lipschitz)


def build_problem(spec: Dict[str, Any]) -> VIProblem:
    """Return a VIProblem for a problem-spec dict.

    kind can be: 'hphard' (n, m, seed, start_radius, entry_scale), 'forsaken'
    (radius, start, delta) or 'custom' (n, radius, geometry, center, start,
    operator, constraints, bound, delta).
    """
    if not isinstance(spec, dict):
        raise ProblemSpecError("problem spec must be a JSON object")
    kind = str(spec.get("kind", "")).lower()
    if kind not in PROBLEM_KINDS:
        raise ProblemSpecError(f"Unsupported problem kind: {kind!r}")

    try:
        delta = float(spec.get("delta", 0.0))
        if kind == "hphard":
            n = int(spec["n"])
            m = int(spec.get("m", 10))
            seed = int(spec.get("seed", 0))
            hp = HpHardSpec(
                n=n,
                seed=seed,
                entry_scale=None if spec.get("entry_scale") is None else float(spec["entry_scale"]),
                start_radius=float(spec.get("start_radius", 0.5)),
            )
            problem = generate_hphard(hp).with_constraints(
                generate_linear_constraints(LinearConstraintsSpec(m=m, n=n, seed=seed))
            )
            return problem.with_delta(delta) if delta else problem

        if kind == "forsaken":
            return forsaken_problem(
                start=spec.get("start", (0.0, 0.0)),
                radius=float(spec.get("radius", 1.2)),
                delta=delta,
            )

        n = int(spec["n"])
        geom_kind = spec.get("geometry", "euclidean")
        if geom_kind == "entropy":
            geometry = get_geometry("entropy", n, start=spec.get("start"))
            reach = 1.0
            if spec.get("bound") is None and spec["operator"].get("type") in ("bilinear", "fixed_point"):
                raise ProblemSpecError("entropy geometry requires an explicit 'bound' for this operator")
        else:
            radius = float(spec.get("radius", 1.0))
            geometry = get_geometry(geom_kind, n, radius=radius, center=spec.get("center"),
                                    start=spec.get("start"))
            reach = radius + float(np.linalg.norm(geometry.center))
        bound = spec.get("bound")
        operator = _operator_from_spec(spec["operator"], n, geom_kind, reach,
                                       float(bound) if bound is not None else None, delta)
        witness = spec.get("witness")
        return VIProblem(
            geometry=geometry,
            operator=operator,
            constraints=_constraints_from_spec(spec.get("constraints"), n, geom_kind),
            witness=np.asarray(witness, dtype=float) if witness is not None else None,
            name=str(spec.get("name", "custom")),
        )
    except KeyError as e:
        raise ProblemSpecError(f"problem spec is missing {e}") from e
    except ProblemSpecError:
        raise
    except (AttributeError, TypeError, ValueError) as e:
        raise ProblemSpecError(str(e)) from e


__all__ = [
    "CallableConstraints",
    "ConstraintFamily",
    "FORSAKEN_REFERENCE",
    "HpHardSpec",
    "LinearConstraints",
    "LinearConstraintsSpec",
    "OperatorReport",
    "OperatorSpec",
    "SplitMixStream",
    "VIProblem",
    "build_problem",
    "check_operator",
    "eval_constraint_max",
    "forsaken_objective",
    "forsaken_operator",
    "forsaken_problem",
    "generate_hphard",
    "generate_linear_constraints",
    "hphard_matrix",
    "spectral_norm",
    "subgradient_of_max",
    "wrap_fixed_point",
    "wrap_minimization",
    "wrap_saddle",
]
