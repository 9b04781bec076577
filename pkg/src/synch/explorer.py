"""
Explicit-state exploration of the k-synchronous semantics.

`breadth_first` is the search loop shared by every analysis (reachability,
deadlocks, the synchronizability product): a level-synchronous BFS with a
visited map, parent pointers for witness reconstruction and a node cap. With
jobs > 1 the successor sets of one level are computed in a process pool and
merged in frontier order, so results are the same for every jobs value.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Generic, Hashable, Optional, Sequence, TypeVar

from .. import config
from ..asynch.execution import Execution, step_to_json
from ..exceptions import NodeCapExceeded, UnknownStateError
from ..model.system import SystemSpec
from .exchange import ExchangeLabel, SyncConfig, execution_of, k_exchange_successors

logger = logging.getLogger(__name__)

S = TypeVar("S", bound=Hashable)
L = TypeVar("L")


@dataclass
class SearchResult(Generic[S, L]):
    """Visited states in discovery order (0 is the initial state)."""

    states: list[S]
    parents: list[Optional[tuple[int, L]]]
    edges: list[tuple[int, L, int]] = field(default_factory=list)
    found: Optional[int] = None
    time_ms: float = 0.0

    def path_to(self, node: int) -> list[L]:
        labels: list[L] = []
        while (step := self.parents[node]) is not None:
            node, label = step
            labels.append(label)
        return labels[::-1]

    def __len__(self) -> int:
        return len(self.states)


def breadth_first(
    initial: S,
    successors: Callable[[S], Sequence[tuple[L, S]]],
    *,
    cap: Optional[int] = None,
    goal: Optional[Callable[[S], bool]] = None,
    confirm: Optional[Callable[[SearchResult[S, L], int], bool]] = None,
    jobs: int = 1,
    keep_edges: bool = False,
    name: str = "search",
) -> SearchResult[S, L]:
    """
    Breadth-first search from `initial`, stopping at the first state satisfying `goal`.

    Args:
        initial: Start state
        successors: Maps a state to its (label, successor) pairs; must be picklable when jobs > 1
        cap: Maximum number of visited states (config.NODE_CAP by default)
        goal: Predicate on states; the search stops at the first match
        confirm: Second check on a goal node, given the search so far; a goal node
            it rejects is kept as visited but not expanded
        jobs: Worker processes used to expand a BFS level
        keep_edges: Record every edge, not only the BFS tree
        name: Used in log messages

    Returns:
        SearchResult: with `found` set to the goal node if one was reached

    Raises:
        NodeCapExceeded: more than `cap` states would be visited
    """
    cap = config.NODE_CAP if cap is None else cap
    start = time.perf_counter()
    result: SearchResult[S, L] = SearchResult([initial], [None])
    index: dict[S, int] = {initial: 0}
    if goal is not None and goal(initial) and (confirm is None or confirm(result, 0)):
        result.found = 0
        return result

    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        frontier = [0]
        depth = 0
        while frontier:
            logger.debug(f"{name}: level {depth}, frontier {len(frontier)}, visited {len(index)}")
            states = [result.states[i] for i in frontier]
            if pool is not None:
                chunk = max(1, len(states) // (4 * jobs))
                expanded = list(pool.map(successors, states, chunksize=chunk))
            else:
                expanded = [successors(s) for s in states]

            next_frontier = []
            for source, pairs in zip(frontier, expanded):
                for label, succ in pairs:
                    target = index.get(succ)
                    if target is None:
                        if len(index) >= cap:
                            logger.warning(f"{name}: node cap of {cap} reached")
                            raise NodeCapExceeded(len(index) + 1, cap)
                        target = len(result.states)
                        index[succ] = target
                        result.states.append(succ)
                        result.parents.append((source, label))
                        if goal is None or not goal(succ):
                            next_frontier.append(target)
                        elif confirm is None or confirm(result, target):
                            result.found = target
                            return result
                    if keep_edges:
                        result.edges.append((source, label, target))
            frontier = next_frontier
            depth += 1
        return result
    finally:
        if pool is not None:
            pool.shutdown()
        result.time_ms = (time.perf_counter() - start) * 1000
        logger.info(f"{name}: {len(result.states)} states in {result.time_ms:.0f} ms")


@dataclass
class ReachabilityGraph:
    spec: SystemSpec
    k: int
    search: SearchResult[SyncConfig, ExchangeLabel]

    @property
    def configs(self) -> list[SyncConfig]:
        return self.search.states

    @property
    def edges(self) -> list[tuple[int, ExchangeLabel, int]]:
        return self.search.edges

    def labels_to(self, node: int) -> list[ExchangeLabel]:
        return self.search.path_to(node)

    def execution_to(self, node: int) -> Execution:
        return execution_of(self.labels_to(node))

    def __len__(self) -> int:
        return len(self.search)


def explore_sync(
    spec: SystemSpec, k: int, *, cap: Optional[int] = None, jobs: int = 1
) -> ReachabilityGraph:
    """
    The full transition system of reachable SyncConfigs under k-exchanges.

    Raises:
        NodeCapExceeded: the reachable part is larger than `cap`
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    search: SearchResult[SyncConfig, ExchangeLabel] = breadth_first(
        SyncConfig.initial(spec),
        partial(k_exchange_successors, spec, k=k),
        cap=cap,
        jobs=jobs,
        keep_edges=True,
        name=f"explore_sync({spec.name}, k={k})",
    )
    return ReachabilityGraph(spec, k, search)


@dataclass(frozen=True)
class ReachResult:
    reachable: bool
    witness: Optional[Execution] = None
    labels: tuple[ExchangeLabel, ...] = ()
    configs: int = 0
    time_ms: float = 0.0


def _local_is(idx: int, state: str, c: SyncConfig) -> bool:
    return c.locals[idx] == state


def sync_reach_local(
    spec: SystemSpec,
    k: int,
    pid: str,
    state: str,
    *,
    cap: Optional[int] = None,
    jobs: int = 1,
) -> ReachResult:
    """
    Is there a k-synchronous execution reaching a configuration where `pid` is in `state`?

    Raises:
        UnknownProcessError, UnknownStateError: for undeclared names
        NodeCapExceeded: as explore_sync
    """
    idx = spec.index(pid)
    if state not in spec.processes[idx].states:
        raise UnknownStateError(f"process {pid} has no state {state}")
    search: SearchResult[SyncConfig, ExchangeLabel] = breadth_first(
        SyncConfig.initial(spec),
        partial(k_exchange_successors, spec, k=k),
        cap=cap,
        goal=partial(_local_is, idx, state),
        jobs=jobs,
        name=f"reach({spec.name}, {pid}={state}, k={k})",
    )
    if search.found is None:
        return ReachResult(False, configs=len(search), time_ms=search.time_ms)
    labels = tuple(search.path_to(search.found))
    return ReachResult(True, execution_of(labels), labels, len(search), search.time_ms)


def label_to_json(label: ExchangeLabel) -> dict[str, Any]:
    return {
        "sends": [step_to_json(s) for s in label.sends],
        "receives": [step_to_json(r) for r in label.receives],
    }


def reachability_graph_to_json(graph: ReachabilityGraph) -> dict[str, Any]:
    return {
        "system": graph.spec.name,
        "k": graph.k,
        "configs": [
            {"id": i, **c.as_dict(graph.spec)} for i, c in enumerate(graph.configs)
        ],
        "edges": [
            {"source": s, "target": t, "label": label_to_json(label)}
            for s, label, t in graph.edges
        ],
    }


def reachability_graph_to_dot(graph: ReachabilityGraph) -> str:
    lines = [f'digraph "{graph.spec.name}_k{graph.k}" {{', "  node [shape=ellipse];"]
    for i, c in enumerate(graph.configs):
        name = ",".join(c.locals)
        blocked = "; ".join(
            f"B({pid})={{{','.join(sorted(b))}}}" for pid, b in zip(graph.spec.pids, c.blocked) if b
        )
        label = f"{name}\\n{blocked}" if blocked else name
        shape = ", peripheries=2" if i == 0 else ""
        lines.append(f'  c{i} [label="{label}"{shape}];')
    for s, label, t in graph.edges:
        lines.append(f'  c{s} -> c{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
