"""Exception hierarchy shared by domain, application and adapter layers.

Every error carries a machine-readable `code` and the CLI `exit_code` it maps
to, so the adapter edge can print a single `[ERROR] code=...` line without
inspecting messages.
"""

from __future__ import annotations


class SimulationError(Exception):
    code = "SIMULATION_ERROR"
    exit_code = 4

    def __init__(self, message: str, *, code: str | None = None) -> None:
        super().__init__(message)
        if code is not None:
            self.code = code


class ConfigError(SimulationError, ValueError):
    """Invalid parameters, unsupported regime/method or a bad config file."""

    code = "INVALID_PARAMS"
    exit_code = 3


class ToleranceError(SimulationError, RuntimeError):
    """A reported error estimate exceeded its tolerance."""

    code = "TAIL_TOLERANCE"
    exit_code = 2


class NumericalError(SimulationError, RuntimeError):
    code = "NUMERICAL_FAILURE"
    exit_code = 4


class ConvergenceError(NumericalError):
    code = "NON_CONVERGENT"


class ExceptionalPointError(NumericalError):
    code = "EXCEPTIONAL_POINT"


class PoleProximityError(NumericalError):
    code = "POLE_PROXIMITY"


class BranchCutProximityError(NumericalError):
    code = "BRANCH_CUT_PROXIMITY"


class RootFindingError(NumericalError):
    code = "ROOT_NOT_FOUND"
