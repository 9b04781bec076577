"""
k-synchronizability checking.

A system is k-synchronizable iff no k-synchronous run of its delayed system
passes the causal monitor while some branch of the violation monitor
accepts. The product of the delayed system's k-exchange semantics with both
monitors is explored breadth-first; an accepting run is mapped back to the
base system, replayed asynchronously, classified, and trimmed to its
shortest failing prefix before it is reported.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import partial
from typing import Any, Optional

from ..analysis.conflict_graph import CycleReport, build_conflict_graph, classify
from ..asynch.engine import replay_async
from ..asynch.execution import Execution, execution_to_json
from ..asynch.trace import check_causal_delivery, linearize, trace_of
from ..exceptions import ActionNotEnabledError, MalformedTraceError, NodeCapExceeded
from ..model.system import SystemSpec
from ..synch.exchange import ExchangeLabel, SyncConfig, execution_of, k_exchange_successors
from ..synch.explorer import SearchResult, breadth_first
from .delayed import DelayedSystem, build_delayed_system, sigma
from .monitors import CausalMonitorState, ViolMonitorState, causal_monitor_step, viol_monitor_step

logger = logging.getLogger(__name__)


class VerdictKind(str, Enum):
    SYNCHRONIZABLE = "synchronizable"
    VIOLATION = "violation"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SynchronizabilityVerdict:
    result: VerdictKind
    k: int
    counterexample: Optional[Execution] = None
    cycle: Optional[CycleReport] = None
    reason: Optional[str] = None
    configs: int = 0
    time_ms: float = 0.0

    @property
    def is_synchronizable(self) -> bool:
        return self.result is VerdictKind.SYNCHRONIZABLE

    @property
    def is_violation(self) -> bool:
        return self.result is VerdictKind.VIOLATION

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "result": self.result.value,
            "k": self.k,
            "stats": {"configs": self.configs, "time_ms": round(self.time_ms)},
        }
        if self.counterexample is not None:
            data["counterexample"] = execution_to_json(self.counterexample)
        if self.cycle is not None:
            data["cycle"] = [n.mid for n in self.cycle.cycle]
            data["cycle_kind"] = self.cycle.verdict.value
            data["cycle_size"] = self.cycle.size
        if self.reason is not None:
            data["reason"] = self.reason
        return data

    def __str__(self) -> str:
        if self.result is VerdictKind.SYNCHRONIZABLE:
            return f"Synchronizable({self.k})"
        if self.result is VerdictKind.VIOLATION:
            return f"Violation({self.k}): {self.cycle}"
        return f"Inconclusive({self.k}): {self.reason}"


@dataclass(frozen=True)
class ProductState:
    config: SyncConfig
    causal: CausalMonitorState
    viol: frozenset[ViolMonitorState]
    accepted: bool = False


def _product_successors(
    delayed: DelayedSystem, k: int, st: ProductState
) -> list[tuple[ExchangeLabel, ProductState]]:
    if st.accepted:
        return []
    relay = delayed.relay
    successors = []
    for label, succ in k_exchange_successors(delayed.spec, st.config, k, solo={relay}):
        parks = any(s.dest == relay for s in label.sends)
        forwards = any(s.proc == relay for s in label.sends)
        # relay exchanges are singletons and always delivered
        if (parks or forwards) and not label.receives:
            continue
        if parks and st.causal.receiver is not None:
            continue
        causal = causal_monitor_step(st.causal, label, relay)
        if causal is None:
            continue
        viol = frozenset(v for state in st.viol for v in viol_monitor_step(state, label, k, relay))
        accepted = any(v.accepted for v in viol)
        if forwards and not accepted:
            continue
        successors.append((label, ProductState(succ, causal, viol, accepted)))
    return successors


def _is_accepted(st: ProductState) -> bool:
    return st.accepted


def validate_counterexample(
    delayed: DelayedSystem, labels: list[ExchangeLabel], k: int
) -> Optional[tuple[Execution, CycleReport]]:
    """
    Map a delayed-system run to a base execution and confirm it is a violation.

    Returns:
        (execution, cycle report) when the image replays asynchronously,
        satisfies causal delivery and fails the conflict-graph check at k
    """
    try:
        image = trace_of(sigma(delayed, execution_of(labels)))
        execution = linearize(image)
        replay_async(delayed.base, execution)
    except (MalformedTraceError, ActionNotEnabledError) as e:
        logger.warning(f"accepted run does not map to a base execution: {e}")
        return None
    if not check_causal_delivery(image).holds:
        logger.warning("accepted run maps to a trace without causal delivery")
        return None
    report = classify(build_conflict_graph(image), k)
    if report.ok:
        logger.info("accepted run is k-synchronous after all; search continues")
        return None
    return minimize_counterexample(delayed.base, execution, k)


def minimize_counterexample(
    spec: SystemSpec, execution: Execution, k: int
) -> tuple[Execution, CycleReport]:
    """The shortest prefix of a violating execution that still violates k-synchrony."""
    execution = execution.canonical()
    for n in range(1, len(execution) + 1):
        prefix = execution.prefix(n)
        t = trace_of(prefix)
        if not check_causal_delivery(t).holds:
            continue
        report = classify(build_conflict_graph(t), k)
        if not report.ok:
            if n < len(execution):
                logger.debug(f"counterexample trimmed from {len(execution)} to {n} steps")
            replay_async(spec, prefix)
            return prefix, report
    raise ValueError("execution does not violate k-synchrony")


def check_k_synchronizability(
    spec: SystemSpec, k: int, *, cap: Optional[int] = None, jobs: int = 1
) -> SynchronizabilityVerdict:
    """
    Decide whether every asynchronous trace of spec is a k-synchronous trace.

    Args:
        spec: System description; no process may be named after the relay
        k: Exchange bound (≥ 1)
        cap: Node cap for the product exploration
        jobs: Worker processes for the exploration

    Returns:
        SynchronizabilityVerdict: Synchronizable, Violation with a validated
        counterexample, or Inconclusive when the node cap is hit
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    delayed = build_delayed_system(spec)
    found: dict[str, tuple[Execution, CycleReport]] = {}

    def confirm(search: SearchResult[ProductState, ExchangeLabel], node: int) -> bool:
        witness = validate_counterexample(delayed, search.path_to(node), k)
        if witness is not None:
            found["witness"] = witness
        return witness is not None

    initial = ProductState(
        SyncConfig.initial(delayed.spec), CausalMonitorState(), frozenset({ViolMonitorState()})
    )
    try:
        search = breadth_first(
            initial,
            partial(_product_successors, delayed, k),
            cap=cap,
            goal=_is_accepted,
            confirm=confirm,
            jobs=jobs,
            name=f"check({spec.name}, k={k})",
        )
    except NodeCapExceeded as e:
        return SynchronizabilityVerdict(
            VerdictKind.INCONCLUSIVE, k, reason=str(e), configs=e.explored
        )

    if search.found is None:
        logger.info(f"{spec.name} is {k}-synchronizable")
        return SynchronizabilityVerdict(
            VerdictKind.SYNCHRONIZABLE, k, configs=len(search), time_ms=search.time_ms
        )
    execution, report = found["witness"]
    logger.info(f"{spec.name} is not {k}-synchronizable: {report}")
    return SynchronizabilityVerdict(
        VerdictKind.VIOLATION,
        k,
        counterexample=execution,
        cycle=report,
        configs=len(search),
        time_ms=search.time_ms,
    )
