"""
Traces: the program order and send/receive matching of an execution.

A trace keeps, per process, the sequence of its indexed actions (program
order is total per process) and matches sends to receives by message id.
The causal relation is the transitive closure of po and src; it is kept as a
networkx DiGraph whose reachability answers causality queries.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Mapping, Optional

import networkx as nx

from ..exceptions import MalformedTraceError
from .execution import Execution, IndexedAction, MessageId, step_to_json

Position = tuple[str, int]


@dataclass(frozen=True)
class Trace:
    """(A, po, src) stored as per-process action sequences, sorted by process id."""

    sequences: tuple[tuple[str, tuple[IndexedAction, ...]], ...]

    @classmethod
    def from_sequences(cls, sequences: Mapping[str, tuple[IndexedAction, ...]]) -> Trace:
        return cls(tuple(sorted((pid, tuple(seq)) for pid, seq in sequences.items() if seq)))

    @cached_property
    def _by_pid(self) -> dict[str, tuple[IndexedAction, ...]]:
        return dict(self.sequences)

    def sequence(self, pid: str) -> tuple[IndexedAction, ...]:
        return self._by_pid.get(pid, ())

    @property
    def pids(self) -> tuple[str, ...]:
        return tuple(pid for pid, _ in self.sequences)

    @cached_property
    def actions(self) -> frozenset[IndexedAction]:
        return frozenset(a for _, seq in self.sequences for a in seq)

    @cached_property
    def position(self) -> dict[IndexedAction, Position]:
        return {a: (pid, i) for pid, seq in self.sequences for i, a in enumerate(seq)}

    @cached_property
    def sends(self) -> dict[MessageId, IndexedAction]:
        return {a.mid: a for a in self.actions if a.is_send}

    @cached_property
    def receives(self) -> dict[MessageId, IndexedAction]:
        return {a.mid: a for a in self.actions if not a.is_send}

    @property
    def po(self) -> frozenset[tuple[IndexedAction, IndexedAction]]:
        return frozenset(
            (seq[i], seq[j])
            for _, seq in self.sequences
            for i in range(len(seq))
            for j in range(i + 1, len(seq))
        )

    @property
    def src(self) -> frozenset[tuple[IndexedAction, IndexedAction]]:
        return frozenset(
            (s, self.receives[mid]) for mid, s in self.sends.items() if mid in self.receives
        )

    def receive_of(self, send: IndexedAction) -> Optional[IndexedAction]:
        return self.receives.get(send.mid)

    def is_matched(self, send: IndexedAction) -> bool:
        return send.mid in self.receives

    def po_before(self, a: IndexedAction, b: IndexedAction) -> bool:
        pa, pb = self.position[a], self.position[b]
        return pa[0] == pb[0] and pa[1] < pb[1]

    def unmatched_sends(self) -> list[IndexedAction]:
        unmatched = (s for mid, s in self.sends.items() if mid not in self.receives)
        return sorted(unmatched, key=lambda a: a.mid)

    @cached_property
    def causal_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.actions)
        for _, seq in self.sequences:
            graph.add_edges_from(zip(seq, seq[1:]))
        graph.add_edges_from(self.src)
        return graph

    def causally_before(self, a: IndexedAction, b: IndexedAction) -> bool:
        """a ⤳ b."""
        return a != b and nx.has_path(self.causal_graph, a, b)

    def canonical_key(self) -> tuple:
        """Identity of the trace up to a consistent renaming of message ids."""
        key = []
        for pid, seq in self.sequences:
            entries = []
            for a in seq:
                partner = self.receives.get(a.mid) if a.is_send else self.sends.get(a.mid)
                entries.append(
                    (a.kind.value, a.dest, a.payload, self.position[partner] if partner else None)
                )
            key.append((pid, tuple(entries)))
        return tuple(key)

    def __len__(self) -> int:
        return len(self.actions)


def trace_of(execution: Execution) -> Trace:
    """
    Build the trace of an execution and check that it is well formed.

    Raises:
        MalformedTraceError: duplicate ids, receives without a matching send,
            payload or destination mismatches, or a cyclic po ∪ src
    """
    sequences: dict[str, list[IndexedAction]] = defaultdict(list)
    sends: dict[MessageId, IndexedAction] = {}
    receives: dict[MessageId, IndexedAction] = {}
    for step in execution:
        table = sends if step.is_send else receives
        if step.mid in table:
            raise MalformedTraceError(f"message id {step.mid} used by two {step.kind.value}s")
        table[step.mid] = step
        sequences[step.proc].append(step)

    for mid, r in receives.items():
        s = sends.get(mid)
        if s is None:
            raise MalformedTraceError(f"receive {r} has no matching send")
        if s.dest != r.proc or s.payload != r.payload:
            raise MalformedTraceError(f"receive {r} does not match send {s}")

    trace = Trace.from_sequences({pid: tuple(seq) for pid, seq in sequences.items()})
    if not nx.is_directed_acyclic_graph(trace.causal_graph):
        raise MalformedTraceError("program order and message matching form a cycle")
    return trace


@dataclass(frozen=True)
class CausalDeliveryVerdict:
    holds: bool
    first: Optional[IndexedAction] = None
    second: Optional[IndexedAction] = None
    first_receive: Optional[IndexedAction] = None
    second_receive: Optional[IndexedAction] = None

    def __str__(self) -> str:
        if self.holds:
            return "causal delivery holds"
        return f"causal delivery violated by {self.first} ⤳ {self.second}"


def causal_relation(t: Trace) -> nx.DiGraph:
    """po ∪ src as a graph; a ⤳ b iff b is reachable from a."""
    return t.causal_graph


def check_causal_delivery(trace: Trace) -> CausalDeliveryVerdict:
    """
    For sends s1 ⤳ s2 with the same destination, s2 must be unmatched, or both
    are matched and the receive of s2 is not program-ordered before that of s1.
    """
    sends = sorted(trace.sends.values(), key=lambda a: a.mid)
    causal = causal_relation(trace)
    for s1 in sends:
        later = nx.descendants(causal, s1)
        for s2 in sends:
            if s2 not in later or s2.dest != s1.dest:
                continue
            r2 = trace.receive_of(s2)
            if r2 is None:
                continue
            r1 = trace.receive_of(s1)
            if r1 is None or trace.po_before(r2, r1):
                return CausalDeliveryVerdict(False, s1, s2, r1, r2)
    return CausalDeliveryVerdict(True)


def is_conflict_preserving_permutation(e: Execution, e2: Execution) -> bool:
    """True iff both executions have the same trace (equivalently, differ by valid swaps)."""
    if sorted(e.steps, key=_step_key) != sorted(e2.steps, key=_step_key):
        return False
    try:
        return trace_of(e) == trace_of(e2)
    except MalformedTraceError:
        return False


def _step_key(a: IndexedAction) -> tuple:
    return (a.mid, a.kind.value, a.proc, a.payload, a.dest or "")


def linearize(trace: Trace) -> Execution:
    """
    An execution of the asynchronous semantics with the given trace.

    Besides po and src, sends to the same process are ordered as their
    receives are, and unmatched sends to a process come after the matched
    ones, so every receive finds its message at the head of the buffer.

    Raises:
        MalformedTraceError: when no such order exists
    """
    graph = trace.causal_graph.copy()
    for pid, seq in trace.sequences:
        matched = [trace.sends[r.mid] for r in seq if not r.is_send]
        graph.add_edges_from(zip(matched, matched[1:]))
    by_dest: dict[str, list[IndexedAction]] = defaultdict(list)
    for s in trace.unmatched_sends():
        assert s.dest is not None
        by_dest[s.dest].append(s)
    for dest, unmatched in by_dest.items():
        matched = [trace.sends[r.mid] for r in trace.sequence(dest) if not r.is_send]
        if matched:
            graph.add_edges_from((matched[-1], s) for s in unmatched)

    try:
        order = list(
            nx.lexicographical_topological_sort(graph, key=lambda a: (a.mid, not a.is_send))
        )
    except nx.NetworkXUnfeasible as e:
        raise MalformedTraceError("trace has no FIFO-consistent linearization") from e
    return Execution(tuple(order))


def trace_to_json(trace: Trace) -> dict[str, Any]:
    """Actions per process, po as [[proc, index], [proc, index]] pairs, src as message ids."""
    return {
        "processes": {pid: [step_to_json(a) for a in seq] for pid, seq in trace.sequences},
        "po": [
            [[pid, i], [pid, j]]
            for pid, seq in trace.sequences
            for i in range(len(seq))
            for j in range(i + 1, len(seq))
        ],
        "src": sorted(mid for mid in trace.sends if mid in trace.receives),
    }
