"""
k-synchronous traces and explicit exchange schedules for them.

A trace satisfying causal delivery whose conflict graph has only good cycles
of size at most k is cut into exchanges: one exchange per strongly connected
component, components in topological order, each holding its sends followed
by its receives.
"""

from __future__ import annotations

import logging

import networkx as nx

from ..asynch.execution import IndexedAction
from ..asynch.trace import Trace, check_causal_delivery
from ..exceptions import ExchangeReplayError, ScheduleError, TheoremInapplicableError
from ..synch.exchange import ExchangeLabel, replay_exchanges
from .conflict_graph import CGNode, build_conflict_graph, classify

logger = logging.getLogger(__name__)


def is_k_synchronous_trace(t: Trace, k: int) -> bool:
    """
    Raises:
        TheoremInapplicableError: when t violates causal delivery
    """
    delivery = check_causal_delivery(t)
    if not delivery.holds:
        raise TheoremInapplicableError(str(delivery))
    return classify(build_conflict_graph(t), k).ok


def schedule_k_exchanges(t: Trace, k: int) -> list[ExchangeLabel]:
    """
    Cut a k-synchronous trace into exchange blocks.

    Within a block, sends respect program order and the receive order of
    each destination, unmatched sends to a process follow its matched ones,
    and ties go to the lowest mid. The result is replayed before returning.

    Raises:
        TheoremInapplicableError: t violates causal delivery
        ScheduleError: t is not k-synchronous, or no FIFO-consistent order exists
    """
    if not is_k_synchronous_trace(t, k):
        raise ScheduleError(f"trace is not {k}-synchronous")
    cg = build_conflict_graph(t)
    condensed = nx.condensation(cg.graph)
    order = nx.lexicographical_topological_sort(
        condensed, key=lambda c: min(n.mid for n in condensed.nodes[c]["members"])
    )
    blocks = [_block(t, sorted(condensed.nodes[c]["members"])) for c in order]
    try:
        replay_exchanges(blocks, k)
    except ExchangeReplayError as e:
        raise ScheduleError(f"schedule does not replay: {e}") from e
    logger.debug(f"scheduled {len(t)} actions into {len(blocks)} exchanges")
    return blocks


def _block(t: Trace, component: list[CGNode]) -> ExchangeLabel:
    sends = [n.send for n in component]
    receives = [n.receive for n in component if n.receive is not None]

    constraints = nx.DiGraph()
    constraints.add_nodes_from(sends)
    _chain_per_process(t, constraints, sends)
    for dest in sorted({s.dest for s in sends if s.dest is not None}):
        matched = [
            n.send
            for n in sorted(
                (n for n in component if n.receive is not None and n.send.dest == dest),
                key=lambda n: t.position[n.receive],  # type: ignore[index]
            )
        ]
        constraints.add_edges_from(zip(matched, matched[1:]))
        if matched:
            constraints.add_edges_from(
                (matched[-1], n.send)
                for n in component
                if n.receive is None and n.send.dest == dest
            )
    try:
        send_order = list(nx.lexicographical_topological_sort(constraints, key=lambda a: a.mid))
    except nx.NetworkXUnfeasible as e:
        raise ScheduleError(
            "sends of component " + ",".join(n.label for n in component) + " have no FIFO order"
        ) from e

    receive_graph = nx.DiGraph()
    receive_graph.add_nodes_from(receives)
    _chain_per_process(t, receive_graph, receives)
    receive_order = list(nx.lexicographical_topological_sort(receive_graph, key=lambda a: a.mid))
    return ExchangeLabel(tuple(send_order), tuple(receive_order))


def _chain_per_process(t: Trace, graph: nx.DiGraph, actions: list[IndexedAction]) -> None:
    by_proc: dict[str, list[IndexedAction]] = {}
    for a in sorted(actions, key=lambda a: t.position[a]):
        by_proc.setdefault(a.proc, []).append(a)
    for chain in by_proc.values():
        graph.add_edges_from(zip(chain, chain[1:]))
