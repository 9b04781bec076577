"""
k-exchange transitions of the bounded-exchange (k-synchronous) semantics.

An exchange is a run of at most k sends followed by receives of messages
sent in the same exchange, replayed from empty buffers. Messages left
undelivered are dropped; the blocked map B records, for every process q, the
processes whose future messages q may no longer receive because they are
causally after a message dropped on its way to q.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import AbstractSet, Iterable, Mapping, Optional, Sequence

from ..asynch.execution import Execution, IndexedAction
from ..exceptions import ExchangeReplayError
from ..model.system import SystemSpec, Transition

Blocked = Mapping[str, AbstractSet[str]]


@dataclass(frozen=True)
class SyncConfig:
    """Local states and blocked-sender sets, both indexed like spec.processes."""

    locals: tuple[str, ...]
    blocked: tuple[frozenset[str], ...]

    @classmethod
    def initial(cls, spec: SystemSpec) -> SyncConfig:
        return cls(spec.initial_locals(), tuple(frozenset() for _ in spec.processes))

    def blocked_map(self, spec: SystemSpec) -> dict[str, frozenset[str]]:
        return dict(zip(spec.pids, self.blocked))

    def as_dict(self, spec: SystemSpec) -> dict:
        return {
            "locals": dict(zip(spec.pids, self.locals)),
            "blocked": {pid: sorted(b) for pid, b in zip(spec.pids, self.blocked) if b},
        }


@dataclass(frozen=True)
class ExchangeLabel:
    sends: tuple[IndexedAction, ...]
    receives: tuple[IndexedAction, ...] = ()

    @property
    def steps(self) -> tuple[IndexedAction, ...]:
        return self.sends + self.receives

    def is_matched(self, s: IndexedAction) -> bool:
        return any(r.mid == s.mid for r in self.receives)

    def unmatched(self) -> list[IndexedAction]:
        received = {r.mid for r in self.receives}
        return [s for s in self.sends if s.mid not in received]

    def __str__(self) -> str:
        return "[" + " ".join(str(a) for a in self.steps) + "]"


def update_blocked(blocked: Blocked, label: ExchangeLabel) -> dict[str, frozenset[str]]:
    """
    The blocked map after an exchange.

    q blocks the sender of every message dropped on its way to q. It also
    blocks every process that becomes causally later than such a message:
    receivers of the dropper's later messages in the same exchange, and
    receivers of messages sent by processes q already blocks.
    """
    received = {r.mid for r in label.receives}
    grown: dict[str, set[str]] = {q: set(b) for q, b in blocked.items()}
    for i, s in enumerate(label.sends):
        if s.mid in received:
            continue
        assert s.dest is not None
        into = grown.setdefault(s.dest, set())
        into.add(s.proc)
        into.update(
            later.dest
            for later in label.sends[i + 1 :]
            if later.proc == s.proc and later.mid in received and later.dest is not None
        )
    for q, b in blocked.items():
        for s in label.sends:
            if s.proc in b and s.mid in received and s.dest is not None:
                grown[q].add(s.dest)
    return {q: frozenset(b) for q, b in grown.items()}


def apply_exchange(
    spec: SystemSpec, c: SyncConfig, label: ExchangeLabel, locals_: tuple[str, ...]
) -> SyncConfig:
    """Successor of c under label, given the local states the label leads to."""
    blocked = update_blocked(c.blocked_map(spec), label)
    return SyncConfig(locals_, tuple(blocked.get(pid, frozenset()) for pid in spec.pids))


def _independent(a: tuple[int, Transition], b: tuple[int, Transition]) -> bool:
    return a[0] != b[0] and a[1].action.dest != b[1].action.dest


def _send_sequences(
    spec: SystemSpec, locals_: tuple[str, ...], k: int, solo: AbstractSet[str]
) -> list[tuple[list[tuple[int, Transition]], tuple[str, ...]]]:
    """
    Send runs of length 1..k from locals_, in (process, transition index) order.

    Adjacent independent sends (different sender and destination) appear with
    the lower process index first; other interleavings yield the same buffers.
    Sends from or to a process in `solo` only occur alone.
    """
    runs: list[tuple[list[tuple[int, Transition]], tuple[str, ...]]] = []

    def extend(current: tuple[str, ...], chosen: list[tuple[int, Transition]]) -> None:
        if chosen:
            runs.append((list(chosen), current))
        if len(chosen) == k:
            return
        if chosen and _is_solo(chosen[0][1], solo):
            return
        for idx, proc in enumerate(spec.processes):
            for t in proc.outgoing(current[idx]):
                if not t.action.is_send:
                    continue
                if chosen and _is_solo(t, solo):
                    continue
                step = (idx, t)
                if chosen and chosen[-1][0] > idx and _independent(chosen[-1], step):
                    continue
                extend(current[:idx] + (t.target,) + current[idx + 1 :], chosen + [step])

    extend(locals_, [])
    return runs


def _is_solo(t: Transition, solo: AbstractSet[str]) -> bool:
    return bool(solo) and (t.action.actor in solo or t.action.dest in solo)


def _receive_options(
    spec: SystemSpec,
    idx: int,
    state: str,
    inbox: Sequence[IndexedAction],
    blocked: AbstractSet[str],
) -> list[tuple[tuple[IndexedAction, ...], str]]:
    """Every FIFO prefix of inbox process idx can receive, with the state it ends in."""
    options: list[tuple[tuple[IndexedAction, ...], str]] = [((), state)]
    frontier = [((), state)]
    proc = spec.processes[idx]
    for s in inbox:
        if s.proc in blocked:
            break
        following = []
        for taken, at in frontier:
            for t in proc.outgoing(at):
                if not t.action.is_send and t.action.payload == s.payload:
                    following.append((taken + (IndexedAction(t.action, s.mid),), t.target))
        if not following:
            break
        options.extend(following)
        frontier = following
    return options


def k_exchange_successors(
    spec: SystemSpec, c: SyncConfig, k: int, solo: AbstractSet[str] = frozenset()
) -> list[tuple[ExchangeLabel, SyncConfig]]:
    """
    All k-exchanges enabled in c, with their successor configurations.

    Labels number their messages 1..n in send order. Sends are enumerated by
    (process, transition index); receives are listed per process in buffer
    order, processes in declaration order.

    Args:
        spec: System description
        c: Current configuration
        k: Maximum number of sends per exchange (≥ 1)
        solo: Processes whose sends and receipts must form an exchange of their own

    Returns:
        list: (label, successor) pairs without duplicates
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    results: list[tuple[ExchangeLabel, SyncConfig]] = []
    seen: set[tuple[ExchangeLabel, SyncConfig]] = set()
    blocked = c.blocked_map(spec)

    for run, after_sends in _send_sequences(spec, c.locals, k, solo):
        sends = tuple(IndexedAction(t.action, mid) for mid, (_, t) in enumerate(run, start=1))
        inboxes: dict[int, list[IndexedAction]] = {}
        for s in sends:
            assert s.dest is not None
            inboxes.setdefault(spec.index(s.dest), []).append(s)

        receivers = sorted(inboxes)
        per_receiver = [
            _receive_options(
                spec, idx, after_sends[idx], inboxes[idx], blocked.get(spec.pids[idx], frozenset())
            )
            for idx in receivers
        ]
        for choice in product(*per_receiver):
            receives: tuple[IndexedAction, ...] = ()
            locals_ = list(after_sends)
            for idx, (taken, state) in zip(receivers, choice):
                receives += taken
                locals_[idx] = state
            label = ExchangeLabel(sends, receives)
            succ = apply_exchange(spec, c, label, tuple(locals_))
            if (label, succ) not in seen:
                seen.add((label, succ))
                results.append((label, succ))
    return results


def execution_of(labels: Iterable[ExchangeLabel]) -> Execution:
    """Flatten exchange labels into one execution with globally fresh message ids."""
    steps: list[IndexedAction] = []
    next_mid = 1
    for label in labels:
        renaming = {}
        for s in label.sends:
            renaming[s.mid] = next_mid
            next_mid += 1
        steps.extend(a.with_mid(renaming[a.mid]) for a in label.steps)
    return Execution(tuple(steps))


@dataclass(frozen=True)
class ReplayState:
    """Blocked map after a replay, and the local states it may end in (empty without a spec)."""

    blocked: dict[str, frozenset[str]]
    locals: frozenset[tuple[str, ...]] = frozenset()


def replay_exchanges(
    blocks: Sequence[ExchangeLabel], k: int, spec: Optional[SystemSpec] = None
) -> ReplayState:
    """
    Check that a sequence of exchange blocks is a k-synchronous execution.

    Every block must have at most k sends, receive only its own messages in
    FIFO order, and respect the blocked map. With a spec, the actions must
    also follow the processes' transitions from their initial states.

    Returns:
        ReplayState: the final blocked map and local states

    Raises:
        ExchangeReplayError: naming the first offending block
    """
    blocked: dict[str, frozenset[str]] = {}
    states: set[tuple[str, ...]] = {spec.initial_locals()} if spec is not None else set()
    for n, block in enumerate(blocks, start=1):
        if len(block.sends) > k:
            raise ExchangeReplayError(f"block {n} has {len(block.sends)} sends, more than k={k}")
        if any(not s.is_send for s in block.sends) or any(r.is_send for r in block.receives):
            raise ExchangeReplayError(f"block {n} is not a run of sends followed by receives")

        inbox: dict[str, list[IndexedAction]] = {}
        for s in block.sends:
            assert s.dest is not None
            inbox.setdefault(s.dest, []).append(s)
        taken: dict[str, int] = {}
        for r in block.receives:
            queue = inbox.get(r.proc, [])
            pos = taken.get(r.proc, 0)
            if pos >= len(queue) or queue[pos].mid != r.mid or queue[pos].payload != r.payload:
                raise ExchangeReplayError(f"block {n}: {r} is not at the head of {r.proc}'s buffer")
            if queue[pos].proc in blocked.get(r.proc, frozenset()):
                raise ExchangeReplayError(
                    f"block {n}: {r.proc} may not receive from {queue[pos].proc} any more"
                )
            taken[r.proc] = pos + 1

        if spec is not None:
            states = _follow(spec, states, block.steps)
            if not states:
                raise ExchangeReplayError(
                    f"block {n} does not follow the transitions of {spec.name}"
                )
        blocked = update_blocked(blocked, block)
    return ReplayState(blocked, frozenset(states))


def _follow(
    spec: SystemSpec, states: set[tuple[str, ...]], steps: Iterable[IndexedAction]
) -> set[tuple[str, ...]]:
    for a in steps:
        idx = spec.index(a.proc)
        following = set()
        for locals_ in states:
            for t in spec.processes[idx].outgoing(locals_[idx]):
                if t.action == a.action:
                    following.add(locals_[:idx] + (t.target,) + locals_[idx + 1 :])
        states = following
    return states
