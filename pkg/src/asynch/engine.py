"""
Asynchronous (unbounded FIFO) semantics and bounded exploration.

Every process owns one FIFO buffer holding the messages addressed to it. A
send enqueues at the tail of the destination's buffer; a receive dequeues the
head. Exploration is bounded by buffer capacity and execution length so that
it can serve as a desk-scale oracle.
"""

from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from ..exceptions import ActionNotEnabledError, NotEnabledReason
from ..model.system import SystemSpec, Transition
from .execution import Execution, IndexedAction, MessageId
from .trace import trace_of

logger = logging.getLogger(__name__)

Message = tuple[MessageId, str]


@dataclass(frozen=True)
class AsyncConfig:
    """Local states and buffers, both indexed like spec.processes."""

    locals: tuple[str, ...]
    buffers: tuple[tuple[Message, ...], ...]
    used: frozenset[MessageId] = frozenset()

    @classmethod
    def initial(cls, spec: SystemSpec) -> AsyncConfig:
        return cls(spec.initial_locals(), tuple(() for _ in spec.processes))

    @property
    def next_mid(self) -> MessageId:
        return max(self.used, default=0) + 1


def _matching(
    spec: SystemSpec, c: AsyncConfig, a: IndexedAction, target: Optional[str]
) -> list[Transition]:
    idx = spec.index(a.proc)
    proc = spec.processes[idx]
    found = [
        t
        for t in proc.outgoing(c.locals[idx])
        if t.action == a.action and (target is None or t.target == target)
    ]
    if not found:
        raise ActionNotEnabledError(
            NotEnabledReason.NO_TRANSITION, f"{a} from state {c.locals[idx]} of {a.proc}"
        )
    return found


def _fire(spec: SystemSpec, c: AsyncConfig, a: IndexedAction, target: str) -> AsyncConfig:
    idx = spec.index(a.proc)
    locals_ = c.locals[:idx] + (target,) + c.locals[idx + 1 :]
    buffers = list(c.buffers)
    if a.is_send:
        assert a.dest is not None
        d = spec.index(a.dest)
        buffers[d] = buffers[d] + ((a.mid, a.payload),)
        return AsyncConfig(locals_, tuple(buffers), c.used | {a.mid})
    buffers[idx] = buffers[idx][1:]
    return AsyncConfig(locals_, tuple(buffers), c.used)


def _check_enabled(spec: SystemSpec, c: AsyncConfig, a: IndexedAction) -> None:
    if a.is_send:
        return
    buf = c.buffers[spec.index(a.proc)]
    if not buf or buf[0] != (a.mid, a.payload):
        head = f"head {buf[0]}" if buf else "empty buffer"
        raise ActionNotEnabledError(NotEnabledReason.WRONG_BUFFER_HEAD, f"{a} with {head}")


def async_step(
    spec: SystemSpec, c: AsyncConfig, a: IndexedAction, target: Optional[str] = None
) -> AsyncConfig:
    """
    Fire one indexed action.

    Args:
        spec: System description
        c: Current configuration
        a: Action to fire
        target: Target state when the process has several transitions with this label
            (the first one in declaration order is taken otherwise)

    Returns:
        AsyncConfig: the successor configuration

    Raises:
        ActionNotEnabledError: no transition, wrong buffer head, or a reused message id
    """
    _check_enabled(spec, c, a)
    transitions = _matching(spec, c, a, target)
    if a.is_send and a.mid in c.used:
        raise ActionNotEnabledError(NotEnabledReason.STALE_MID, f"{a} reuses message id {a.mid}")
    return _fire(spec, c, a, transitions[0].target)


def async_successors(
    spec: SystemSpec, c: AsyncConfig, buffer_bound: Optional[int] = None
) -> Iterator[tuple[IndexedAction, str, AsyncConfig]]:
    """Enabled steps in (process, transition index) order; sends get the next fresh id."""
    mid = c.next_mid
    for idx, proc in enumerate(spec.processes):
        buf = c.buffers[idx]
        for t in proc.outgoing(c.locals[idx]):
            if t.action.is_send:
                assert t.action.dest is not None
                if buffer_bound is not None:
                    if len(c.buffers[spec.index(t.action.dest)]) >= buffer_bound:
                        continue
                a = IndexedAction(t.action, mid)
            else:
                if not buf or buf[0][1] != t.action.payload:
                    continue
                a = IndexedAction(t.action, buf[0][0])
            yield a, t.target, _fire(spec, c, a, t.target)


def replay_async(spec: SystemSpec, steps: Iterable[IndexedAction]) -> set[AsyncConfig]:
    """
    Replay an execution from the initial configuration.

    Nondeterministic transitions are followed in every branch, so executions
    replay without recording target states.

    Returns:
        set: the configurations the execution may end in

    Raises:
        ActionNotEnabledError: when some step is enabled in no branch
    """
    frontier = {AsyncConfig.initial(spec)}
    for a in steps:
        following: set[AsyncConfig] = set()
        error: Optional[ActionNotEnabledError] = None
        for c in frontier:
            try:
                _check_enabled(spec, c, a)
                if a.is_send and a.mid in c.used:
                    raise ActionNotEnabledError(
                        NotEnabledReason.STALE_MID, f"{a} reuses message id {a.mid}"
                    )
                for t in _matching(spec, c, a, None):
                    following.add(_fire(spec, c, a, t.target))
            except ActionNotEnabledError as e:
                error = e
        if not following:
            assert error is not None
            raise error
        frontier = following
    return frontier


def explore_async(spec: SystemSpec, buffer_bound: int, depth_bound: int) -> list[Execution]:
    """
    Enumerate executions of length ≤ depth_bound whose buffers never exceed buffer_bound.

    Args:
        spec: System description
        buffer_bound: Maximum buffer length at any point (≥ 1)
        depth_bound: Maximum number of steps (≥ 1)

    Returns:
        list: executions in BFS order, deduplicated up to message-id renaming
    """
    if buffer_bound < 1 or depth_bound < 1:
        raise ValueError("bounds must be at least 1")
    start = time.perf_counter()
    root = (Execution(), AsyncConfig.initial(spec))
    frontier: deque[tuple[Execution, AsyncConfig]] = deque([root])
    seen = {Execution()}
    executions = [Execution()]
    while frontier:
        execution, c = frontier.popleft()
        if len(execution) >= depth_bound:
            continue
        for a, _, succ in async_successors(spec, c, buffer_bound):
            extended = Execution(execution.steps + (a,))
            frontier.append((extended, succ))
            key = extended.canonical()
            if key not in seen:
                seen.add(key)
                executions.append(extended)
    logger.info(
        f"explore_async({spec.name}): {len(executions)} executions "
        f"in {(time.perf_counter() - start) * 1000:.0f} ms"
    )
    return executions


def explore_async_traces(spec: SystemSpec, buffer_bound: int, depth_bound: int) -> list[Execution]:
    """
    Like explore_async, but keep one representative execution per trace.

    Nodes are identified by the trace, the local states and the buffer
    contents (as trace positions of the queued sends), so the search stays
    complete while visiting each trace once.
    """
    if buffer_bound < 1 or depth_bound < 1:
        raise ValueError("bounds must be at least 1")
    start = time.perf_counter()
    initial = AsyncConfig.initial(spec)
    frontier: deque[tuple[Execution, AsyncConfig]] = deque([(Execution(), initial)])
    visited = {_node_key(Execution(), initial)}
    trace_keys = {trace_of(Execution()).canonical_key()}
    representatives = [Execution()]
    while frontier:
        execution, c = frontier.popleft()
        if len(execution) >= depth_bound:
            continue
        for a, _, succ in async_successors(spec, c, buffer_bound):
            extended = Execution(execution.steps + (a,))
            key = _node_key(extended, succ)
            if key in visited:
                continue
            visited.add(key)
            frontier.append((extended, succ))
            if key[0] not in trace_keys:
                trace_keys.add(key[0])
                representatives.append(extended)
    logger.info(
        f"explore_async_traces({spec.name}): {len(representatives)} traces, "
        f"{len(visited)} nodes in {(time.perf_counter() - start) * 1000:.0f} ms"
    )
    return representatives


def _node_key(execution: Execution, c: AsyncConfig) -> tuple:
    trace = trace_of(execution)
    sends = trace.sends
    buffers = tuple(tuple(trace.position[sends[mid]] for mid, _ in buf) for buf in c.buffers)
    return trace.canonical_key(), c.locals, buffers
