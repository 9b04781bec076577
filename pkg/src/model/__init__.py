"""System model: static description, DSL parser and printer, validation"""

from .parser import load_system, parse_system
from .printer import format_system
from .system import (
    Action,
    ActionKind,
    ProcessDef,
    SystemSpec,
    Transition,
    enabled_actions,
    recv,
    send,
)
from .validation import Diagnostic, Severity, validate_system

__all__ = [
    "Action",
    "ActionKind",
    "Diagnostic",
    "ProcessDef",
    "Severity",
    "SystemSpec",
    "Transition",
    "enabled_actions",
    "format_system",
    "load_system",
    "parse_system",
    "recv",
    "send",
    "validate_system",
]
