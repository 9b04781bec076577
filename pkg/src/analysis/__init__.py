"""Trace analysis: conflict graphs, cycle classification, exchange schedules"""

from .conflict_graph import (
    CGNode,
    ConflictGraph,
    CycleReport,
    CycleVerdict,
    build_conflict_graph,
    classify,
    conflict_graph_to_dot,
)
from .scheduling import is_k_synchronous_trace, schedule_k_exchanges

__all__ = [
    "CGNode",
    "ConflictGraph",
    "CycleReport",
    "CycleVerdict",
    "build_conflict_graph",
    "classify",
    "conflict_graph_to_dot",
    "is_k_synchronous_trace",
    "schedule_k_exchanges",
]
