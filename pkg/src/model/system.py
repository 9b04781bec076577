"""
Static description of a message-passing system.

A system is a family of finite process transition systems whose transitions
are labeled by a single send or receive action. Every other stage consumes
SystemSpec; all types here are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterator, Optional

from ..exceptions import UnknownProcessError, UnknownStateError


class ActionKind(str, Enum):
    SEND = "send"
    RECV = "recv"


@dataclass(frozen=True, order=True)
class Action:
    """A send or receive action; `dest` is set for sends only."""

    kind: ActionKind
    actor: str
    payload: str
    dest: Optional[str] = None

    @property
    def is_send(self) -> bool:
        return self.kind is ActionKind.SEND

    def __str__(self) -> str:
        if self.is_send:
            return f"send({self.actor},{self.dest},{self.payload})"
        return f"rec({self.actor},{self.payload})"


def send(actor: str, dest: str, payload: str) -> Action:
    return Action(ActionKind.SEND, actor, payload, dest)


def recv(actor: str, payload: str) -> Action:
    return Action(ActionKind.RECV, actor, payload)


@dataclass(frozen=True)
class Transition:
    source: str
    action: Action
    target: str


@dataclass(frozen=True)
class ProcessDef:
    """
    One process: its local states, initial state and labeled transitions.

    Transitions keep their declaration order; the index of a transition inside
    `outgoing(state)` is what exploration engines use to order choices.
    """

    pid: str
    initial: str
    states: tuple[str, ...]
    transitions: tuple[Transition, ...] = field(default=())

    @cached_property
    def _outgoing(self) -> dict[str, tuple[Transition, ...]]:
        table: dict[str, list[Transition]] = {state: [] for state in self.states}
        for t in self.transitions:
            table.setdefault(t.source, []).append(t)
        return {state: tuple(ts) for state, ts in table.items()}

    def outgoing(self, state: str) -> tuple[Transition, ...]:
        try:
            return self._outgoing[state]
        except KeyError:
            raise UnknownStateError(f"process {self.pid} has no state {state}") from None

    def is_final(self, state: str) -> bool:
        """No outgoing transition at all."""
        return not self.outgoing(state)

    def is_receiving(self, state: str) -> bool:
        """At least one outgoing transition, and all of them are receives."""
        out = self.outgoing(state)
        return bool(out) and all(not t.action.is_send for t in out)

    def receivable(self, state: str) -> frozenset[str]:
        return frozenset(t.action.payload for t in self.outgoing(state) if not t.action.is_send)


@dataclass(frozen=True)
class SystemSpec:
    name: str
    payloads: tuple[str, ...]
    processes: tuple[ProcessDef, ...]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {p.pid: i for i, p in enumerate(self.processes)}

    @property
    def pids(self) -> tuple[str, ...]:
        return tuple(p.pid for p in self.processes)

    def index(self, pid: str) -> int:
        try:
            return self._index[pid]
        except KeyError:
            raise UnknownProcessError(f"system {self.name} has no process {pid}") from None

    def process(self, pid: str) -> ProcessDef:
        return self.processes[self.index(pid)]

    def initial_locals(self) -> tuple[str, ...]:
        return tuple(p.initial for p in self.processes)

    def __iter__(self) -> Iterator[ProcessDef]:
        return iter(self.processes)

    def __len__(self) -> int:
        return len(self.processes)


def enabled_actions(spec: SystemSpec, pid: str, state: str) -> set[tuple[Action, str]]:
    """
    Transitions of process `pid` leaving local state `state`.

    Args:
        spec: System description
        pid: Process id
        state: Local state of that process

    Returns:
        set: (action, target state) pairs

    Raises:
        UnknownProcessError, UnknownStateError: for undeclared names
    """
    return {(t.action, t.target) for t in spec.process(pid).outgoing(state)}
