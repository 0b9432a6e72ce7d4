"""Exception hierarchy shared by the algorithm layers and the lab."""

from __future__ import annotations


class LabError(ValueError):
    """Base error for everything raised on purpose by this package."""


class FrameMismatchError(LabError):
    """Operands live on different frames or have incompatible shapes."""

    def __init__(self, expected: object, received: object) -> None:
        super().__init__(f"Frame mismatch: expected {expected}, got {received}.")
        self.expected = expected
        self.received = received


class StandingAssumptionError(LabError):
    """A frame used as an operator domain is built on B with B(0) != 0."""


class SymbolDegreeError(LabError):
    """A symbol needs more Taylor coefficients than the frame carries."""


class ConvergenceError(LabError):
    """A structure recursion did not settle within the iteration cap."""

    def __init__(self, iterations: int, remainder: float) -> None:
        super().__init__(
            f"Recursion did not settle after {iterations} steps"
            f" (remaining relative norm {remainder:.3e})."
        )
        self.iterations = iterations
        self.remainder = remainder


class NotInvariantError(LabError):
    """The subspace is not invariant under the operator within tolerance."""

    def __init__(self, residual: float, tolerance: float) -> None:
        super().__init__(
            f"Invariance residual {residual:.3e} exceeds {tolerance:.3e}."
        )
        self.residual = residual
        self.tolerance = tolerance


class HypothesisError(LabError):
    """A named hypothesis of a structure theorem failed numerically."""

    def __init__(
        self,
        hypothesis: str,
        residual: float | None = None,
        detail: str | None = None,
    ) -> None:
        message = f"Hypothesis '{hypothesis}' failed"
        if residual is not None:
            message += f" (residual {residual:.3e})"
        if detail:
            message += f": {detail}"
        super().__init__(message + ".")
        self.hypothesis = hypothesis
        self.residual = residual


class ParameterCapError(LabError):
    """Generator parameter ranges exceed the documented caps."""


class ScenarioFormatError(LabError):
    """A scenario or ledger file cannot be read."""
