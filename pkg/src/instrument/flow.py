"""
Flow bounds and the search for the least k.

A process is k-receive-bounded when it never performs more than k receives
in a row, and k-send-bounded when it never performs more than k sends in a
row right before a receive. A system where every process is both is
flow-bounded: if it is synchronizable at all, it is k-synchronizable for
some k ≤ (k_send + k_receive) × |processes|.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Optional

import networkx as nx

from ..analysis.conflict_graph import CycleVerdict
from ..exceptions import FlowBoundError
from ..model.system import ProcessDef, SystemSpec
from .checker import SynchronizabilityVerdict, VerdictKind, check_k_synchronizability

logger = logging.getLogger(__name__)

UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class FlowBounds:
    """None stands for unbounded."""

    receive_bound: Optional[int]
    send_bound: Optional[int]

    @property
    def is_bounded(self) -> bool:
        return self.receive_bound is not None and self.send_bound is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "receive_bound": UNBOUNDED if self.receive_bound is None else self.receive_bound,
            "send_bound": UNBOUNDED if self.send_bound is None else self.send_bound,
        }


def _subgraph(p: ProcessDef, reachable: set[str], sends: bool) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(reachable)
    graph.add_edges_from(
        (t.source, t.target)
        for t in p.transitions
        if t.action.is_send == sends and t.source in reachable
    )
    return graph


def flow_bounds(p: ProcessDef) -> FlowBounds:
    control = nx.MultiDiGraph()
    control.add_nodes_from(p.states)
    control.add_edges_from((t.source, t.target) for t in p.transitions)
    reachable = nx.descendants(control, p.initial) | {p.initial}

    receives = _subgraph(p, reachable, sends=False)
    receive_bound = (
        nx.dag_longest_path_length(receives) if nx.is_directed_acyclic_graph(receives) else None
    )

    # send runs count only when a receive follows them directly
    sends = _subgraph(p, reachable, sends=True)
    ready = {s for s in reachable if p.receivable(s)}
    leading = set(ready)
    for s in ready:
        leading |= nx.ancestors(sends, s)
    relevant = sends.subgraph(leading)
    if not nx.is_directed_acyclic_graph(relevant):
        return FlowBounds(receive_bound, None)

    longest: dict[str, int] = {}
    for s in reversed(list(nx.topological_sort(relevant))):
        options = [1 + longest[t] for t in relevant.successors(s) if t in longest]
        if s in ready:
            options.append(0)
        if options:
            longest[s] = max(options)
    return FlowBounds(receive_bound, max(longest.values(), default=0))


def system_flow_bounds(spec: SystemSpec) -> dict[str, FlowBounds]:
    return {p.pid: flow_bounds(p) for p in spec}


def auto_k_cap(bounds: dict[str, FlowBounds]) -> Optional[int]:
    """(max send bound + max receive bound) × |processes|, or None when not flow-bounded."""
    if not all(b.is_bounded for b in bounds.values()):
        return None
    k_send = max((b.send_bound or 0 for b in bounds.values()), default=0)
    k_receive = max((b.receive_bound or 0 for b in bounds.values()), default=0)
    return max(1, (k_send + k_receive) * len(bounds))


@dataclass(frozen=True)
class MinKResult:
    verdict: SynchronizabilityVerdict
    bounds: dict[str, FlowBounds]
    k_cap: int
    auto_cap: bool
    definitive: bool = False
    attempts: tuple[SynchronizabilityVerdict, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.to_dict(),
            "flow_bounds": {pid: b.to_dict() for pid, b in self.bounds.items()},
            "k_cap": self.k_cap,
            "cap_source": "auto" if self.auto_cap else "user",
            "definitive": self.definitive,
            "attempts": [{"k": a.k, "result": a.result.value} for a in self.attempts],
        }


def min_k_search(
    spec: SystemSpec, k_cap: Optional[int] = None, *, cap: Optional[int] = None, jobs: int = 1
) -> MinKResult:
    """
    Find the least k for which spec is k-synchronizable.

    Args:
        spec: System description
        k_cap: Largest k to try; derived from the flow bounds when omitted
        cap: Node cap for each check
        jobs: Worker processes for each check

    Returns:
        MinKResult: Synchronizable at the first k that succeeds; a definitive
        Violation as soon as a bad cycle shows up; Inconclusive when the cap
        is exhausted or an exploration hits the node cap

    Raises:
        FlowBoundError: k_cap omitted for a system that is not flow-bounded
    """
    bounds = system_flow_bounds(spec)
    auto = k_cap is None
    if k_cap is None:
        k_cap = auto_k_cap(bounds)
        if k_cap is None:
            unbounded = sorted(pid for pid, b in bounds.items() if not b.is_bounded)
            raise FlowBoundError(
                f"{spec.name} is not flow-bounded (processes {', '.join(unbounded)}); "
                "pass an explicit cap on k"
            )
    if k_cap < 1:
        raise ValueError("k cap must be at least 1")
    logger.info(f"min-k search on {spec.name} up to k={k_cap} ({'auto' if auto else 'user'} cap)")

    attempts: list[SynchronizabilityVerdict] = []
    for k in range(1, k_cap + 1):
        verdict = check_k_synchronizability(spec, k, cap=cap, jobs=jobs)
        attempts.append(verdict)
        if verdict.result is VerdictKind.SYNCHRONIZABLE:
            return MinKResult(verdict, bounds, k_cap, auto, True, tuple(attempts))
        if verdict.result is VerdictKind.INCONCLUSIVE:
            return MinKResult(verdict, bounds, k_cap, auto, False, tuple(attempts))
        if verdict.cycle is not None and verdict.cycle.verdict is CycleVerdict.BAD:
            logger.info(f"bad cycle at k={k}: {spec.name} is not synchronizable for any k")
            return MinKResult(verdict, bounds, k_cap, auto, True, tuple(attempts))

    exhausted = SynchronizabilityVerdict(
        VerdictKind.INCONCLUSIVE,
        k_cap,
        reason=f"not k-synchronizable for any k <= {k_cap} and no bad cycle found",
        configs=sum(a.configs for a in attempts),
        time_ms=sum(a.time_ms for a in attempts),
    )
    return MinKResult(exhausted, bounds, k_cap, auto, False, tuple(attempts))
