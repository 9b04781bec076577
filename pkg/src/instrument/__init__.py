"""Synchronizability checking: delayed system, monitors, min-k search"""

from .checker import (
    ProductState,
    SynchronizabilityVerdict,
    VerdictKind,
    check_k_synchronizability,
    minimize_counterexample,
    validate_counterexample,
)
from .delayed import DelayedSystem, build_delayed_system, sigma
from .flow import FlowBounds, MinKResult, auto_k_cap, flow_bounds, min_k_search, system_flow_bounds
from .monitors import (
    CausalMonitorState,
    ViolMonitorState,
    causal_monitor_step,
    viol_monitor_step,
)

__all__ = [
    "CausalMonitorState",
    "DelayedSystem",
    "FlowBounds",
    "MinKResult",
    "ProductState",
    "SynchronizabilityVerdict",
    "VerdictKind",
    "ViolMonitorState",
    "auto_k_cap",
    "build_delayed_system",
    "causal_monitor_step",
    "check_k_synchronizability",
    "flow_bounds",
    "min_k_search",
    "minimize_counterexample",
    "sigma",
    "system_flow_bounds",
    "validate_counterexample",
    "viol_monitor_step",
]
