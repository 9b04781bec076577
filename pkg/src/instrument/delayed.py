"""
The delayed system: one message of the base system may be routed through
an extra relay process, which receives it and forwards it later.

Every send(p, q, v) transition gains a sibling send(p, relay, "q:v") with the
same source and target. The relay accepts one such message, moves to a state
named after it, sends v to q and stops. ':' never occurs in DSL identifiers,
so relayed payloads cannot clash with base payloads.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .. import config
from ..asynch.execution import Execution, IndexedAction
from ..exceptions import ReservedNameError
from ..model.system import ProcessDef, SystemSpec, Transition, recv, send

logger = logging.getLogger(__name__)

RELAY_INITIAL = "l0"
RELAY_FINAL = "lf"


def delayed_payload(dest: str, payload: str) -> str:
    return f"{dest}:{payload}"


def split_delayed_payload(payload: str) -> tuple[str, str]:
    dest, _, value = payload.partition(":")
    return dest, value


@dataclass(frozen=True)
class DelayedSystem:
    base: SystemSpec
    spec: SystemSpec
    relay: str = config.RELAY_PROCESS

    def is_delay(self, a: IndexedAction) -> bool:
        """A send redirected to the relay."""
        return a.is_send and a.dest == self.relay


def build_delayed_system(spec: SystemSpec, relay: str = config.RELAY_PROCESS) -> DelayedSystem:
    """
    Raises:
        ReservedNameError: when the base system already has a process named `relay`
    """
    if relay in spec.pids:
        raise ReservedNameError(f"process name {relay!r} is reserved for the relay process")

    processes = []
    relayed: set[tuple[str, str]] = set()
    for proc in spec.processes:
        transitions: list[Transition] = []
        for t in proc.transitions:
            transitions.append(t)
            if t.action.is_send:
                assert t.action.dest is not None
                redirected = delayed_payload(t.action.dest, t.action.payload)
                redirect = send(proc.pid, relay, redirected)
                transitions.append(Transition(t.source, redirect, t.target))
                relayed.add((t.action.dest, t.action.payload))
        processes.append(ProcessDef(proc.pid, proc.initial, proc.states, tuple(transitions)))

    relay_transitions = []
    for dest, value in sorted(relayed):
        holding = delayed_payload(dest, value)
        relay_transitions.append(Transition(RELAY_INITIAL, recv(relay, holding), holding))
        relay_transitions.append(Transition(holding, send(relay, dest, value), RELAY_FINAL))
    relay_states = (RELAY_INITIAL, RELAY_FINAL) + tuple(
        delayed_payload(d, v) for d, v in sorted(relayed)
    )
    processes.append(ProcessDef(relay, RELAY_INITIAL, relay_states, tuple(relay_transitions)))

    payloads = spec.payloads + tuple(delayed_payload(d, v) for d, v in sorted(relayed))
    delayed = SystemSpec(f"{spec.name}_delayed", payloads, tuple(processes))
    logger.debug(f"delayed system of {spec.name}: {len(relayed)} relayable messages")
    return DelayedSystem(spec, delayed, relay)


def sigma(delayed: DelayedSystem, execution: Execution) -> Execution:
    """
    Map an execution of the delayed system back to the base system.

    The redirected send becomes the original send, the relay's own actions
    disappear and the final receive takes the message id of the redirected
    send.
    """
    delayed_mid = None
    forwarded_mid = None
    steps: list[IndexedAction] = []
    for a in execution:
        if delayed.is_delay(a):
            dest, value = split_delayed_payload(a.payload)
            delayed_mid = a.mid
            steps.append(IndexedAction(send(a.proc, dest, value), a.mid))
        elif a.proc == delayed.relay:
            if a.is_send:
                forwarded_mid = a.mid
        elif not a.is_send and a.mid == forwarded_mid:
            assert delayed_mid is not None
            steps.append(IndexedAction(a.action, delayed_mid))
        else:
            steps.append(a)
    return Execution(tuple(steps))
