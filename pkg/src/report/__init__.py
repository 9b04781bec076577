"""Report schemas and renderers"""

from .schema import (
    CORPUS_SCHEMA,
    DEADLOCK_SCHEMA,
    MIN_K_SCHEMA,
    ORACLE_SCHEMA,
    REACH_SCHEMA,
    REACHABILITY_GRAPH_SCHEMA,
    TRACE_SCHEMA,
    VERDICT_SCHEMA,
    validate_report,
)

__all__ = [
    "CORPUS_SCHEMA",
    "DEADLOCK_SCHEMA",
    "MIN_K_SCHEMA",
    "ORACLE_SCHEMA",
    "REACHABILITY_GRAPH_SCHEMA",
    "REACH_SCHEMA",
    "TRACE_SCHEMA",
    "VERDICT_SCHEMA",
    "validate_report",
]
