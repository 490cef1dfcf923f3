from __future__ import annotations
from typing import Any, Optional


class VIError(Exception):
    pass


class DomainError(VIError, ValueError):
    """A point lies outside the feasible set (beyond the membership tolerance)."""


class MirrorStepError(VIError, RuntimeError):
    pass


class DegenerateOperatorError(VIError, ArithmeticError):
    """A norm-dependent step rule received a (numerically) zero norm."""


class InconsistentConstraintError(DegenerateOperatorError):
    """Zero constraint subgradient at a point violating the constraint."""


class NoProductiveStepsError(VIError, RuntimeError):
    def __init__(self, message: str, state: Optional[Any] = None) -> None:
        super().__init__(message)
        self.state = state


class DimensionError(VIError, ValueError):
    pass


class MissingWitnessError(VIError, LookupError):
    pass


class ProblemSpecError(VIError, ValueError):
    pass


class ConfigurationError(VIError, ValueError):
    pass
