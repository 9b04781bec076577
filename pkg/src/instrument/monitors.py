"""
Monitors run in lockstep with k-exchanges of the delayed system.

The causal monitor cuts runs whose image in the base system would break
causal delivery: once a message to q is parked at the relay, no process
causally after its sender may deliver to q. The violation monitor guesses a
conflict-graph path that starts at the parked message and accepts when the
forwarded delivery closes it into a bad cycle or one longer than k.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .. import config
from ..synch.exchange import ExchangeLabel
from .delayed import split_delayed_payload


@dataclass(frozen=True)
class CausalMonitorState:
    cone: frozenset[str] = frozenset()
    receiver: Optional[str] = None


def causal_monitor_step(
    st: CausalMonitorState, label: ExchangeLabel, relay: str = config.RELAY_PROCESS
) -> Optional[CausalMonitorState]:
    """
    Advance the causal monitor over one exchange.

    Returns:
        The next state, or None when the exchange is rejected
    """
    if any(s.proc == relay for s in label.sends):
        return st

    cone, receiver = set(st.cone), st.receiver
    growers = [s for s in label.sends if s.proc in st.cone]
    for i, s in enumerate(label.sends):
        if s.dest == relay and receiver is None:
            receiver, _ = split_delayed_payload(s.payload)
            cone = {s.proc}
            # within this exchange only later sends of the delaying process follow it
            growers = [later for later in label.sends[i + 1 :] if later.proc == s.proc]
            break

    for s in growers:
        if not label.is_matched(s) or s.dest == relay:
            continue
        if s.dest == receiver:
            return None
        assert s.dest is not None
        cone.add(s.dest)
    return CausalMonitorState(frozenset(cone), receiver)


@dataclass(frozen=True)
class ViolMonitorState:
    """`conflict` is the process owning the last node of the guessed path."""

    conflict: Optional[str] = None
    last_is_rec: bool = False
    saw_rs: bool = False
    count: int = 0
    accepted: bool = False


def viol_monitor_step(
    st: ViolMonitorState, label: ExchangeLabel, k: int, relay: str = config.RELAY_PROCESS
) -> frozenset[ViolMonitorState]:
    """
    Every state the violation monitor may move to over one exchange.

    Each send may extend the path or be skipped. A matched pair touching the
    conflict process moves `conflict` to its sender or its receiver; an
    unmatched send by the conflict process only lengthens the path. The
    forwarded delivery to q accepts when the path ends at q and is bad or
    has more than k nodes.
    """
    if st.accepted:
        return frozenset({st})

    forwarded = next((s for s in label.sends if s.proc == relay), None)
    if forwarded is not None:
        closes = st.conflict is not None and st.conflict == forwarded.dest
        if closes and (st.count == 0 or st.saw_rs):
            return frozenset({replace(st, accepted=True)})
        return frozenset({st})

    parked = next((s for s in label.sends if s.dest == relay), None)
    if parked is not None:
        if st.conflict is None:
            return frozenset({ViolMonitorState(parked.proc, False, False, k)})
        return frozenset({st})

    if st.conflict is None:
        return frozenset({st})

    states = {st}
    for s in label.sends:
        matched = label.is_matched(s)
        extended = set()
        for v in states:
            shorter = max(0, v.count - 1)
            if matched and v.conflict in (s.proc, s.dest):
                extended.add(
                    replace(
                        v,
                        conflict=s.proc,
                        saw_rs=v.saw_rs or v.last_is_rec,
                        last_is_rec=False,
                        count=shorter,
                    )
                )
                extended.add(replace(v, conflict=s.dest, last_is_rec=True, count=shorter))
            elif not matched and s.proc == v.conflict:
                extended.add(replace(v, last_is_rec=False, count=shorter))
        states |= extended
    return frozenset(states)
