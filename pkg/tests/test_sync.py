"""Tests for k-exchanges, exchange replay and the breadth-first explorer"""

import pytest
from conftest import execution, r, s

from src.analysis import schedule_k_exchanges
from src.asynch import trace_of
from src.exceptions import (
    ExchangeReplayError,
    NodeCapExceeded,
    UnknownProcessError,
    UnknownStateError,
)
from src.model import parse_system
from src.synch import (
    ExchangeLabel,
    SyncConfig,
    breadth_first,
    execution_of,
    explore_sync,
    k_exchange_successors,
    reachability_graph_to_dot,
    reachability_graph_to_json,
    replay_exchanges,
    sync_reach_local,
    update_blocked,
)


def test_update_blocked_on_drop():
    """Test a dropped message blocks its sender and later receivers of the sender."""
    label = ExchangeLabel(
        (s(1, "p", "q", "a"), s(2, "p", "r", "b")),
        (r(2, "r", "b"),),
    )
    assert update_blocked({}, label) == {"q": frozenset({"p", "r"})}


def test_update_blocked_propagates():
    """Test receivers of messages from blocked processes become blocked."""
    label = ExchangeLabel((s(1, "p", "t", "a"),), (r(1, "t", "a"),))
    blocked = update_blocked({"q": frozenset({"p"})}, label)
    assert blocked == {"q": frozenset({"p", "t"})}


def test_update_blocked_earlier_sends_unaffected():
    """Test sends before the drop in the same exchange do not block their receivers."""
    label = ExchangeLabel(
        (s(1, "p", "r", "b"), s(2, "p", "q", "a")),
        (r(1, "r", "b"),),
    )
    assert update_blocked({}, label) == {"q": frozenset({"p"})}


def test_update_blocked_ignores_dropped_sends_of_blocked_process():
    """Test a dropped message of a blocked process does not block its receiver."""
    label = ExchangeLabel((s(1, "p", "t", "a"),))
    blocked = update_blocked({"q": frozenset({"p"})}, label)
    assert blocked == {"q": frozenset({"p"}), "t": frozenset({"p"})}


def test_delivery_after_dropped_relay_of_blocked_process():
    """Test q still receives from r when r only got a dropped message from a process q blocks."""
    t = trace_of(
        execution(s(1, "p", "q", "a"), s(2, "p", "r", "b"), s(3, "r", "q", "c"), r(3, "q", "c"))
    )
    blocks = schedule_k_exchanges(t, 1)
    assert [str(b) for b in blocks] == [
        "[send1(p,q,a)]",
        "[send2(p,r,b)]",
        "[send3(r,q,c) rec3(q,c)]",
    ]
    assert replay_exchanges(blocks, 1).blocked == {
        "q": frozenset({"p"}),
        "r": frozenset({"p"}),
    }


def test_successors_k1(producer_consumer):
    """Test a 1-exchange either delivers the message or drops it."""
    c = SyncConfig.initial(producer_consumer)
    successors = k_exchange_successors(producer_consumer, c, 1)
    assert [str(label) for label, _ in successors] == [
        "[send1(prod,cons,m)]",
        "[send1(prod,cons,m) rec1(cons,m)]",
    ]
    assert successors[1][1] == c
    assert successors[0][1].blocked_map(producer_consumer) == {
        "prod": frozenset(),
        "cons": frozenset({"prod"}),
    }


def test_successors_k2(producer_consumer):
    """Test FIFO prefixes of the receiver's messages with two sends."""
    c = SyncConfig.initial(producer_consumer)
    labels = [str(label) for label, _ in k_exchange_successors(producer_consumer, c, 2)]
    assert "[send1(prod,cons,m) send2(prod,cons,m) rec1(cons,m) rec2(cons,m)]" in labels
    assert "[send1(prod,cons,m) send2(prod,cons,m) rec1(cons,m)]" in labels
    assert "[send1(prod,cons,m) send2(prod,cons,m) rec2(cons,m)]" not in labels
    assert len(labels) == len(set(labels))


def test_blocked_sender_is_not_received(producer_consumer):
    """Test a receiver never takes a message from a sender it blocks."""
    c = SyncConfig(producer_consumer.initial_locals(), (frozenset(), frozenset({"prod"})))
    successors = k_exchange_successors(producer_consumer, c, 1)
    assert [str(label) for label, _ in successors] == ["[send1(prod,cons,m)]"]


def test_successors_reject_k_zero(commit):
    """Test k must be positive."""
    with pytest.raises(ValueError):
        k_exchange_successors(commit, SyncConfig.initial(commit), 0)


def test_execution_of_renumbers():
    """Test message ids are fresh across exchanges."""
    label = ExchangeLabel((s(1, "prod", "cons", "m"),), (r(1, "cons", "m"),))
    assert str(execution_of([label, label])) == (
        "send1(prod,cons,m) rec1(cons,m) send2(prod,cons,m) rec2(cons,m)"
    )


def test_replay_exchanges_follows_spec(commit):
    """Test a replay ends in the local states the blocks lead to."""
    blocks = [
        ExchangeLabel((s(1, "c", "m", "update"),), (r(1, "m", "update"),)),
        ExchangeLabel((s(2, "m", "n1", "req"),)),
    ]
    state = replay_exchanges(blocks, 1, commit)
    assert state.locals == frozenset({("Wait", "S2", "Init", "Init")})
    assert state.blocked == {"n1": frozenset({"m"})}


def test_replay_rejects_too_many_sends():
    """Test blocks have at most k sends."""
    block = ExchangeLabel((s(1, "p", "q", "a"), s(2, "p", "q", "b")))
    with pytest.raises(ExchangeReplayError, match="more than k=1"):
        replay_exchanges([block], 1)


def test_replay_rejects_out_of_order_receive():
    """Test receives follow the buffer order."""
    block = ExchangeLabel(
        (s(1, "p", "q", "a"), s(2, "p", "q", "b")),
        (r(2, "q", "b"),),
    )
    with pytest.raises(ExchangeReplayError, match="not at the head"):
        replay_exchanges([block], 2)


def test_replay_rejects_blocked_sender():
    """Test a receive from a blocked sender fails."""
    blocks = [
        ExchangeLabel((s(1, "p", "q", "a"),)),
        ExchangeLabel((s(2, "p", "q", "b"),), (r(2, "q", "b"),)),
    ]
    with pytest.raises(ExchangeReplayError, match="may not receive"):
        replay_exchanges(blocks, 1)


def test_replay_rejects_wrong_transitions(commit):
    """Test blocks must follow the processes' transitions."""
    blocks = [ExchangeLabel((s(1, "m", "n1", "req"),), (r(1, "n1", "req"),))]
    with pytest.raises(ExchangeReplayError, match="does not follow"):
        replay_exchanges(blocks, 1, commit)


def test_breadth_first_goal_and_path():
    """Test BFS finds a shortest path on a counter."""
    result = breadth_first(
        0, lambda n: [("+1", n + 1), ("+2", n + 2)], goal=lambda n: n == 5, cap=100
    )
    assert result.found is not None
    assert result.states[result.found] == 5
    assert result.path_to(result.found) == ["+1", "+2", "+2"]


def test_breadth_first_cap():
    """Test the node cap stops an infinite search."""
    with pytest.raises(NodeCapExceeded) as excinfo:
        breadth_first(0, lambda n: [("+1", n + 1)], cap=10)
    assert excinfo.value.cap == 10
    assert excinfo.value.explored == 11


def test_breadth_first_confirm_rejects():
    """Test a rejected goal node is neither reported nor expanded."""
    seen = []

    def successors(n):
        seen.append(n)
        return [("+1", n + 1), ("+4", n + 4)]

    result = breadth_first(
        0,
        successors,
        goal=lambda n: n in (2, 5),
        confirm=lambda search, i: search.states[i] == 5,
        cap=100,
    )
    assert result.found is not None
    assert result.states[result.found] == 5
    assert 2 in result.states
    assert 2 not in seen


def test_explore_sync_producer_consumer(producer_consumer):
    """Test the 1-synchronous graph: deliver or drop, then only drop."""
    graph = explore_sync(producer_consumer, 1)
    assert len(graph) == 2
    assert [(src, dst) for src, _, dst in graph.edges] == [(0, 1), (0, 0), (1, 1)]
    assert str(graph.execution_to(1)) == "send1(prod,cons,m)"


def test_reachability_graph_exports(producer_consumer):
    """Test JSON and DOT forms of the reachability graph."""
    graph = explore_sync(producer_consumer, 1)
    data = reachability_graph_to_json(graph)
    assert data["system"] == "producer_consumer"
    assert data["configs"][1] == {
        "id": 1,
        "locals": {"prod": "P0", "cons": "C0"},
        "blocked": {"cons": ["prod"]},
    }
    assert len(data["edges"]) == 3
    dot = reachability_graph_to_dot(graph)
    assert 'c0 [label="P0,C0", peripheries=2];' in dot
    assert "B(cons)={prod}" in dot


def test_reach_commit_done(commit):
    """Test the client reaches Done after eight exchanges."""
    result = sync_reach_local(commit, 1, "c", "Done")
    assert result.reachable
    assert len(result.labels) == 8
    assert str(result.labels[-1]) == "[send1(m,c,ok) rec1(c,ok)]"
    assert len(result.witness) == sum(len(label.steps) for label in result.labels)


def test_reach_unreachable(mutual_wait):
    """Test states behind a mutual wait are unreachable."""
    result = sync_reach_local(mutual_wait, 1, "p", "P1")
    assert not result.reachable
    assert result.witness is None
    assert result.configs == 1


def test_reach_unknown_names(commit):
    """Test unknown processes and states are errors."""
    with pytest.raises(UnknownProcessError):
        sync_reach_local(commit, 1, "z", "Done")
    with pytest.raises(UnknownStateError):
        sync_reach_local(commit, 1, "c", "Nowhere")


# The dashed elevator, where the controller also waits for the door to
# acknowledge the fresh open request. The acknowledgement only follows when
# the open and doorOpened messages cross.
ELEVATOR_ACK = """
system elevator_ack
payloads closeDoor open doorOpened close doorStoped ack

process u initial U0
  state U0
    send closeDoor to e goto U0
end

process e initial Closed
  state Closed
    recv closeDoor goto Closed
    send open to d goto Opening2
  state Opening1
    send open to d goto Opening3
  state Opening2
    recv doorOpened goto Opened
  state Opening3
    recv doorOpened goto Reopened
  state Reopened
    recv ack goto Confirmed
  state Confirmed
    send close to d goto Stopping2
  state Opened
    send close to d goto Stopping2
  state Stopping2
    recv doorStoped goto Opening1
end

process d initial DClosed
  state DClosed
    recv open goto OpenDoor
  state OpenDoor
    send doorOpened to e goto ResetDoor
  state ResetDoor
    recv open goto Acking
    recv close goto StopDoor
  state Acking
    send ack to e goto ResetDoor
  state StopDoor
    send doorStoped to e goto OpenDoor
end
"""


def test_reach_needs_crossing_exchange():
    """Test a state behind crossing messages is unreachable at k=1 and reachable at k=2."""
    spec = parse_system(ELEVATOR_ACK)
    assert not sync_reach_local(spec, 1, "e", "Confirmed").reachable
    result = sync_reach_local(spec, 2, "e", "Confirmed")
    assert result.reachable
    assert any(len(label.sends) == 2 for label in result.labels)
    ends = replay_exchanges(result.labels, 2, spec).locals
    assert any(locals_[spec.index("e")] == "Confirmed" for locals_ in ends)
    assert sync_reach_local(spec, 1, "e", "Opening3").reachable


def test_explore_sync_same_for_any_jobs(elevator_dashed):
    """Test a process pool discovers the same configurations and edges in the same order."""
    one = explore_sync(elevator_dashed, 2)
    two = explore_sync(elevator_dashed, 2, jobs=2)
    assert two.configs == one.configs
    assert two.edges == one.edges


@pytest.mark.parametrize("name, k", [("commit", 1), ("elevator", 1), ("elevator_dashed", 2)])
def test_explored_executions_are_prefix_closed(request, name, k):
    """Test every prefix of a path replays to a configuration of the graph."""
    spec = request.getfixturevalue(name)
    graph = explore_sync(spec, k)
    nodes = set(graph.configs)
    for node in range(len(graph)):
        labels = graph.labels_to(node)
        for n in range(len(labels) + 1):
            state = replay_exchanges(labels[:n], k, spec)
            blocked = tuple(state.blocked.get(pid, frozenset()) for pid in spec.pids)
            assert any(SyncConfig(locals_, blocked) in nodes for locals_ in state.locals)
        reached = replay_exchanges(labels, k, spec)
        assert graph.configs[node].locals in reached.locals


@pytest.mark.parametrize("name, k", [("commit", 1), ("elevator", 1), ("elevator_dashed", 2)])
def test_blocked_sets_only_grow(request, name, k):
    """Test no exchange ever unblocks a process."""
    graph = explore_sync(request.getfixturevalue(name), k)
    for source, _, target in graph.edges:
        before, after = graph.configs[source].blocked, graph.configs[target].blocked
        assert all(b <= a for b, a in zip(before, after))
