"""Asynchronous semantics: executions, traces, causal delivery"""

from .engine import (
    AsyncConfig,
    async_step,
    async_successors,
    explore_async,
    explore_async_traces,
    replay_async,
)
from .execution import (
    Execution,
    IndexedAction,
    MessageId,
    execution_from_json,
    execution_to_json,
    load_execution,
)
from .trace import (
    CausalDeliveryVerdict,
    Trace,
    causal_relation,
    check_causal_delivery,
    is_conflict_preserving_permutation,
    linearize,
    trace_of,
    trace_to_json,
)

__all__ = [
    "AsyncConfig",
    "CausalDeliveryVerdict",
    "Execution",
    "IndexedAction",
    "MessageId",
    "Trace",
    "async_step",
    "async_successors",
    "causal_relation",
    "check_causal_delivery",
    "execution_from_json",
    "execution_to_json",
    "explore_async",
    "explore_async_traces",
    "is_conflict_preserving_permutation",
    "linearize",
    "load_execution",
    "replay_async",
    "trace_of",
    "trace_to_json",
]
