"""Exception hierarchy shared by every stage of the toolkit."""

from enum import Enum
from typing import Optional


class SynchroError(Exception):
    """Base class for all toolkit errors."""


class SpecSyntaxError(SynchroError):
    """The system description does not follow the DSL grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SpecValidationError(SynchroError):
    """The system description is well-formed but refers to undeclared or duplicate names."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column


class ReservedNameError(SpecValidationError):
    """A user system uses the name reserved for the relay process."""


class UnknownProcessError(SynchroError):
    pass


class UnknownStateError(SynchroError):
    pass


class NotEnabledReason(str, Enum):
    NO_TRANSITION = "no transition"
    WRONG_BUFFER_HEAD = "wrong buffer head"
    STALE_MID = "stale mid"


class ActionNotEnabledError(SynchroError):
    """An action cannot fire in the given asynchronous configuration."""

    def __init__(self, reason: NotEnabledReason, detail: str):
        super().__init__(f"{reason.value}: {detail}")
        self.reason = reason


class MalformedTraceError(SynchroError):
    """An execution or trace violates the well-formedness rules of traces."""


class TheoremInapplicableError(SynchroError):
    """The conflict-graph characterization was applied to a trace without causal delivery."""


class ScheduleError(SynchroError):
    """No k-exchange schedule can be produced for a trace."""


class ExchangeReplayError(SynchroError):
    """A sequence of exchange blocks is not an execution of the k-synchronous semantics."""


class NodeCapExceeded(SynchroError):
    """An exploration visited more configurations than allowed."""

    def __init__(self, explored: int, cap: int):
        super().__init__(f"node cap of {cap} configurations exceeded ({explored} explored)")
        self.explored = explored
        self.cap = cap


class FlowBoundError(SynchroError):
    """min-k search needs an explicit cap for a system that is not flow-bounded."""
