"""Exception hierarchy shared by every module."""

from __future__ import annotations


class IncompatError(Exception):
    """Base class for all library errors."""


class ValidationError(IncompatError, ValueError):
    """Input violates a structural invariant (Hermiticity, shape, normalization)."""


class NotPSDError(ValidationError):
    """Operator has an eigenvalue below the negative tolerance."""

    def __init__(self, eigenvalue: float, tol: float):
        self.eigenvalue = float(eigenvalue)
        self.tol = float(tol)
        super().__init__(f"operator is not PSD: eigenvalue {self.eigenvalue:.3e} < -{tol:.1e}")


class RankDeficiencyError(IncompatError, ValueError):
    """A tangent direction is not representable on the support of the state."""


class SingularModelError(IncompatError, ValueError):
    """An outcome has zero probability but a nonzero score numerator."""


class InfeasibleAdjustmentError(IncompatError, ValueError):
    """A Fisher matrix has weight outside the support of the quantum Fisher matrix."""


class UnsupportedInputError(IncompatError, ValueError):
    """The requested closed form does not apply to the given input."""


class SolverError(IncompatError, RuntimeError):
    """The interior-point solver failed to converge.

    ``lower`` and ``upper`` carry the best certified bounds found so far.
    """

    def __init__(self, message: str, lower: float = float("nan"), upper: float = float("nan"),
                 iterations: int = 0):
        self.lower = lower
        self.upper = upper
        self.iterations = iterations
        super().__init__(f"{message} (bounds [{lower:.6g}, {upper:.6g}] after {iterations} iterations)")


class CapExceededError(IncompatError, ValueError):
    """Product of outcome counts exceeds the configured cap."""
