"""
Deadlock detection through the k-synchronous semantics.

For a k-synchronizable system, each asynchronous deadlock class has a
k-synchronous counterpart:

- empty-buffer deadlock: a matched k-synchronous execution reaching a
  configuration where some process waits to receive and every process is
  receiving or final;
- orphan message: an execution with an unmatched send ending with every
  process final;
- unspecified reception: a process waiting on payloads V while a causally
  minimal unmatched message addressed to it carries a payload outside V.

The reductions are unsound for systems that are not k-synchronizable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Any, Iterable, Optional

import networkx as nx

from ..asynch.execution import Execution, IndexedAction, execution_to_json
from ..asynch.trace import Trace, trace_of
from ..exceptions import ExchangeReplayError
from ..model.system import ProcessDef, SystemSpec
from ..synch.exchange import (
    ExchangeLabel,
    SyncConfig,
    execution_of,
    k_exchange_successors,
    replay_exchanges,
)
from ..synch.explorer import breadth_first

logger = logging.getLogger(__name__)


class DeadlockKind(str, Enum):
    EMPTY_BUFFER = "empty-buffer"
    ORPHAN = "orphan"
    UNSPECIFIED_RECEPTION = "unspecified-reception"


@dataclass(frozen=True)
class DeadlockReport:
    kind: DeadlockKind
    witness: Execution
    labels: tuple[ExchangeLabel, ...]
    detail: dict[str, Any] = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "witness": execution_to_json(self.witness),
            "detail": self.detail,
        }

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.detail} after {self.witness}"


def _is_stuck(spec: SystemSpec, locals_: tuple[str, ...]) -> bool:
    receiving = [p.is_receiving(s) for p, s in zip(spec.processes, locals_)]
    finished = [p.is_final(s) for p, s in zip(spec.processes, locals_)]
    return any(receiving) and all(r or f for r, f in zip(receiving, finished))


def _all_final(spec: SystemSpec, locals_: tuple[str, ...]) -> bool:
    return all(p.is_final(s) for p, s in zip(spec.processes, locals_))


def _matched_successors(
    spec: SystemSpec, k: int, c: SyncConfig
) -> list[tuple[ExchangeLabel, SyncConfig]]:
    return [
        (label, succ) for label, succ in k_exchange_successors(spec, c, k) if not label.unmatched()
    ]


def _stuck_config(spec: SystemSpec, c: SyncConfig) -> bool:
    return _is_stuck(spec, c.locals)


def find_empty_buffer_deadlock(
    spec: SystemSpec, k: int, *, cap: Optional[int] = None, jobs: int = 1
) -> Optional[DeadlockReport]:
    search = breadth_first(
        SyncConfig.initial(spec),
        partial(_matched_successors, spec, k),
        cap=cap,
        goal=partial(_stuck_config, spec),
        jobs=jobs,
        name=f"empty-buffer({spec.name}, k={k})",
    )
    if search.found is None:
        return None
    c = search.states[search.found]
    labels = tuple(search.path_to(search.found))
    waiting = [p.pid for p, s in zip(spec.processes, c.locals) if p.is_receiving(s)]
    detail = {"waiting": waiting, "locals": dict(zip(spec.pids, c.locals))}
    return DeadlockReport(DeadlockKind.EMPTY_BUFFER, execution_of(labels), labels, detail)


@dataclass(frozen=True)
class _OrphanState:
    config: SyncConfig
    dropped: bool = False


def _orphan_successors(
    spec: SystemSpec, k: int, st: _OrphanState
) -> list[tuple[ExchangeLabel, _OrphanState]]:
    return [
        (label, _OrphanState(succ, st.dropped or bool(label.unmatched())))
        for label, succ in k_exchange_successors(spec, st.config, k)
    ]


def _orphaned(spec: SystemSpec, st: _OrphanState) -> bool:
    return st.dropped and _all_final(spec, st.config.locals)


def find_orphan_message(
    spec: SystemSpec, k: int, *, cap: Optional[int] = None, jobs: int = 1
) -> Optional[DeadlockReport]:
    search = breadth_first(
        _OrphanState(SyncConfig.initial(spec)),
        partial(_orphan_successors, spec, k),
        cap=cap,
        goal=partial(_orphaned, spec),
        jobs=jobs,
        name=f"orphan({spec.name}, k={k})",
    )
    if search.found is None:
        return None
    labels = tuple(search.path_to(search.found))
    witness = execution_of(labels)
    unmatched = [str(s) for s in trace_of(witness).unmatched_sends()]
    return DeadlockReport(DeadlockKind.ORPHAN, witness, labels, {"unmatched": unmatched})


@dataclass(frozen=True)
class _ReceptionState:
    """`pending[i]` holds payloads of causally minimal dropped messages to process i."""

    config: SyncConfig
    pending: tuple[frozenset[str], ...]


def _minimal_drops(
    spec: SystemSpec, c: SyncConfig, label: ExchangeLabel
) -> list[tuple[int, str]]:
    blocked = c.blocked_map(spec)
    drops = label.unmatched()
    minimal = []
    for i, s in enumerate(drops):
        assert s.dest is not None
        if s.proc in blocked.get(s.dest, frozenset()):
            continue
        if any(o.proc == s.proc and o.dest == s.dest for o in drops[:i]):
            continue
        minimal.append((spec.index(s.dest), s.payload))
    return minimal


def _reception_successors(
    spec: SystemSpec, k: int, st: _ReceptionState
) -> list[tuple[ExchangeLabel, _ReceptionState]]:
    successors = []
    for label, succ in k_exchange_successors(spec, st.config, k):
        pending = list(st.pending)
        for idx, payload in _minimal_drops(spec, st.config, label):
            pending[idx] = pending[idx] | {payload}
        successors.append((label, _ReceptionState(succ, tuple(pending))))
    return successors


def _unspecified_at(
    spec: SystemSpec, locals_: tuple[str, ...], pending: Iterable[frozenset[str]]
) -> Optional[tuple[ProcessDef, str, frozenset[str]]]:
    for p, state, payloads in zip(spec.processes, locals_, pending):
        if p.is_receiving(state) and payloads - p.receivable(state):
            return p, state, payloads - p.receivable(state)
    return None


def _has_unspecified(spec: SystemSpec, st: _ReceptionState) -> bool:
    return _unspecified_at(spec, st.config.locals, st.pending) is not None


def find_unspecified_reception(
    spec: SystemSpec, k: int, *, cap: Optional[int] = None, jobs: int = 1
) -> Optional[DeadlockReport]:
    initial = _ReceptionState(SyncConfig.initial(spec), tuple(frozenset() for _ in spec.processes))
    search = breadth_first(
        initial,
        partial(_reception_successors, spec, k),
        cap=cap,
        goal=partial(_has_unspecified, spec),
        jobs=jobs,
        name=f"unspecified-reception({spec.name}, k={k})",
    )
    if search.found is None:
        return None
    st = search.states[search.found]
    found = _unspecified_at(spec, st.config.locals, st.pending)
    assert found is not None
    p, state, offending = found
    labels = tuple(search.path_to(search.found))
    detail = {
        "process": p.pid,
        "state": state,
        "accepts": sorted(p.receivable(state)),
        "offending": sorted(offending),
    }
    return DeadlockReport(DeadlockKind.UNSPECIFIED_RECEPTION, execution_of(labels), labels, detail)


def min_unmatched(t: Trace, p: str) -> set[IndexedAction]:
    """Unmatched sends to p that no other unmatched send to p causally precedes."""
    unmatched = [s for s in t.unmatched_sends() if s.dest == p]
    minimal = set()
    for s in unmatched:
        earlier = nx.ancestors(t.causal_graph, s)
        if not any(o in earlier for o in unmatched if o != s):
            minimal.add(s)
    return minimal


DETECTORS = {
    DeadlockKind.EMPTY_BUFFER: find_empty_buffer_deadlock,
    DeadlockKind.ORPHAN: find_orphan_message,
    DeadlockKind.UNSPECIFIED_RECEPTION: find_unspecified_reception,
}


def find_deadlocks(
    spec: SystemSpec,
    k: int,
    kinds: Optional[Iterable[DeadlockKind]] = None,
    *,
    cap: Optional[int] = None,
    jobs: int = 1,
) -> list[DeadlockReport]:
    """
    Run the selected detectors (all of them by default) in DeadlockKind order.

    Raises:
        NodeCapExceeded: a detector hit the node cap
    """
    selected = set(kinds) if kinds is not None else set(DeadlockKind)
    reports = []
    for kind in DeadlockKind:
        if kind not in selected:
            continue
        report = DETECTORS[kind](spec, k, cap=cap, jobs=jobs)
        if report is not None:
            logger.info(f"{spec.name}: {report.kind.value} found")
            reports.append(report)
    return reports


def check_deadlock_witness(spec: SystemSpec, report: DeadlockReport, k: int) -> bool:
    """
    Replay a report's witness as k-exchanges and evaluate its kind's predicate
    on the configurations it ends in, independently of the search.
    """
    try:
        final = replay_exchanges(report.labels, k, spec)
    except ExchangeReplayError as e:
        logger.error(f"deadlock witness does not replay: {e}")
        return False
    t = trace_of(report.witness)

    if report.kind is DeadlockKind.EMPTY_BUFFER:
        matched = all(not label.unmatched() for label in report.labels)
        return matched and any(_is_stuck(spec, locals_) for locals_ in final.locals)
    if report.kind is DeadlockKind.ORPHAN:
        finished = any(_all_final(spec, locals_) for locals_ in final.locals)
        return bool(t.unmatched_sends()) and finished

    pending = tuple(frozenset(s.payload for s in min_unmatched(t, pid)) for pid in spec.pids)
    return any(_unspecified_at(spec, locals_, pending) is not None for locals_ in final.locals)
