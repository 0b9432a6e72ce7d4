"""Errors raised by the algorithms and the lab harness."""

from __future__ import annotations

from ._exceptions import ConvergenceError
from ._exceptions import FrameMismatchError
from ._exceptions import HypothesisError
from ._exceptions import LabError
from ._exceptions import NotInvariantError
from ._exceptions import ParameterCapError
from ._exceptions import ScenarioFormatError
from ._exceptions import StandingAssumptionError
from ._exceptions import SymbolDegreeError

__all__ = (
    "ConvergenceError",
    "FrameMismatchError",
    "HypothesisError",
    "LabError",
    "NotInvariantError",
    "ParameterCapError",
    "ScenarioFormatError",
    "StandingAssumptionError",
    "SymbolDegreeError",
)
