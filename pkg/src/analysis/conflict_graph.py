"""
Conflict graphs of traces and their cycle classification.

A node is a matched send/receive pair or an unmatched send. There is an edge
v → v′ whenever some action of v is program-ordered before some action of
v′; the edge carries the kinds of every such witnessing pair (SS, SR, RS, RR).
A trace is k-synchronous iff no RS edge lies inside a strongly connected
component and no component has more than k nodes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import networkx as nx

from ..asynch.execution import IndexedAction, MessageId
from ..asynch.trace import Trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class CGNode:
    """A matched pair (receive set) or an unmatched send."""

    mid: MessageId
    send: IndexedAction = field(compare=False)
    receive: Optional[IndexedAction] = field(default=None, compare=False)

    @property
    def is_matched(self) -> bool:
        return self.receive is not None

    @property
    def actions(self) -> tuple[IndexedAction, ...]:
        return (self.send, self.receive) if self.receive is not None else (self.send,)

    @property
    def label(self) -> str:
        return f"{self.mid}:{self.send.payload}" + ("" if self.is_matched else "!")

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class ConflictGraph:
    """Nodes sorted by mid; every edge of `graph` has a frozenset `labels` attribute."""

    nodes: tuple[CGNode, ...]
    graph: nx.DiGraph = field(compare=False, repr=False)

    def labels(self, u: CGNode, v: CGNode) -> frozenset[str]:
        return self.graph.edges[u, v]["labels"]

    @property
    def edges(self) -> list[tuple[CGNode, CGNode]]:
        return sorted(self.graph.edges())

    def node(self, mid: MessageId) -> CGNode:
        for n in self.nodes:
            if n.mid == mid:
                return n
        raise KeyError(mid)

    def __len__(self) -> int:
        return len(self.nodes)


def _kind(a: IndexedAction) -> str:
    return "S" if a.is_send else "R"


def build_conflict_graph(t: Trace) -> ConflictGraph:
    nodes = {mid: CGNode(mid, s, t.receive_of(s)) for mid, s in t.sends.items()}
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(nodes.values()))
    for _, seq in t.sequences:
        for i, a in enumerate(seq):
            u = nodes[a.mid]
            for b in seq[i + 1 :]:
                v = nodes[b.mid]
                if u == v:
                    continue
                label = _kind(a) + _kind(b)
                if graph.has_edge(u, v):
                    graph.edges[u, v]["labels"] = graph.edges[u, v]["labels"] | {label}
                else:
                    graph.add_edge(u, v, labels=frozenset({label}))
    return ConflictGraph(tuple(sorted(nodes.values())), graph)


class CycleVerdict(str, Enum):
    GOOD = "acyclic_or_good"
    BAD = "bad_cycle"
    OVERSIZE = "oversize_cycle"


@dataclass(frozen=True)
class CycleReport:
    verdict: CycleVerdict
    k: int
    cycle: tuple[CGNode, ...] = ()
    size: int = 0
    scc_sizes: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return self.verdict is CycleVerdict.GOOD

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "verdict": self.verdict.value,
            "k": self.k,
            "scc_sizes": list(self.scc_sizes),
        }
        if not self.ok:
            data["cycle"] = [n.mid for n in self.cycle]
            data["size"] = self.size
        return data

    def __str__(self) -> str:
        if self.ok:
            return f"every cycle is good and of size at most {self.k}"
        walk = " -> ".join(n.label for n in self.cycle + self.cycle[:1])
        if self.verdict is CycleVerdict.BAD:
            return f"bad cycle (RS edge): {walk}"
        return f"cycle of size {self.size} > {self.k}: {walk}"


def classify(cg: ConflictGraph, k: int) -> CycleReport:
    """
    Classify the cycles of a conflict graph against bound k.

    Bad cycles are reported before oversize ones. Witnesses are closed walks:
    an RS edge closed by a shortest path, or a walk through every node of the
    oversize component.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    g = cg.graph
    components = sorted(
        (sorted(c) for c in nx.strongly_connected_components(g)), key=lambda c: c[0]
    )
    component_of = {n: i for i, c in enumerate(components) for n in c}
    sizes = tuple(sorted((len(c) for c in components), reverse=True))

    for u, v in cg.edges:
        if "RS" in cg.labels(u, v) and component_of[u] == component_of[v]:
            back = nx.shortest_path(g, v, u)
            cycle = (u,) + tuple(back[:-1])
            logger.debug(f"bad cycle through RS edge {u} -> {v}")
            return CycleReport(CycleVerdict.BAD, k, cycle, len(components[component_of[u]]), sizes)

    for component in components:
        if len(component) > k:
            return CycleReport(
                CycleVerdict.OVERSIZE, k, _covering_walk(g, component), len(component), sizes
            )
    return CycleReport(CycleVerdict.GOOD, k, scc_sizes=sizes)


def _covering_walk(g: nx.DiGraph, component: list[CGNode]) -> tuple[CGNode, ...]:
    walk: list[CGNode] = []
    for a, b in zip(component, component[1:] + component[:1]):
        walk.extend(nx.shortest_path(g, a, b)[:-1])
    return tuple(walk)


def conflict_graph_to_dot(
    cg: ConflictGraph, report: Optional[CycleReport] = None, name: str = "conflict_graph"
) -> str:
    """
    DOT text with nodes "mid:payload" (unmatched ones suffixed "!") and labeled edges.

    RS edges are bold; nodes of the report's witness cycle are drawn red.
    """
    witness = set(report.cycle) if report is not None else set()
    lines = [f'digraph "{name}" {{', "  rankdir=LR;", "  node [shape=box];"]
    for n in cg.nodes:
        style = "" if n.is_matched else ", style=dashed"
        if n in witness:
            style += ", color=red, fontcolor=red"
        lines.append(f'  n{n.mid} [label="{n.label}"{style}];')
    for u, v in cg.edges:
        labels = cg.labels(u, v)
        bold = ", style=bold" if "RS" in labels else ""
        lines.append(f'  n{u.mid} -> n{v.mid} [label="{",".join(sorted(labels))}"{bold}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
