"""Exception hierarchy shared by every lescompose module."""

from __future__ import annotations


class LesError(ValueError):
    """Base class for all lescompose failures."""


class CycleDetected(LesError):
    def __init__(self, cycle, message: str | None = None):
        self.cycle = tuple(cycle)
        super().__init__(message or "causality cycle: " + " -> ".join(map(str, self.cycle)))


class SelfConflict(LesError):
    def __init__(self, event, message: str | None = None):
        self.event = event
        super().__init__(message or f"event {event} would be in conflict with itself")


class UnknownEvent(LesError):
    def __init__(self, event, message: str | None = None):
        self.event = event
        super().__init__(message or f"unknown event {event}")


class UnknownModel(LesError):
    def __init__(self, model, message: str | None = None):
        self.model = model
        super().__init__(message or f"unknown model {model}")


class NotAConfiguration(LesError):
    pass


class NotATrace(LesError):
    pass


class InvalidRank(LesError):
    pass


class SameModel(LesError):
    pass


class InvalidSchedule(LesError):
    pass


class TooLarge(LesError):
    pass


class LesSyntaxError(LesError):
    """Malformed model or scenario text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        self.reason = message
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class NonNegativeWeight(LesSyntaxError):
    pass


class SolverError(LesError):
    """Base class for failures of the external SMT backend."""


class SolverUnavailable(SolverError):
    pass


class SolverReportedUnsat(SolverError):
    pass


class ModelParseError(SolverError):
    pass


class ObjectiveMismatch(SolverError):
    pass
