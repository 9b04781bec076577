"""Deadlock detection by reduction to the k-synchronous semantics"""

from .detector import (
    DeadlockKind,
    DeadlockReport,
    check_deadlock_witness,
    find_deadlocks,
    find_empty_buffer_deadlock,
    find_orphan_message,
    find_unspecified_reception,
    min_unmatched,
)

__all__ = [
    "DeadlockKind",
    "DeadlockReport",
    "check_deadlock_witness",
    "find_deadlocks",
    "find_empty_buffer_deadlock",
    "find_orphan_message",
    "find_unspecified_reception",
    "min_unmatched",
]
