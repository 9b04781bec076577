"""Tests for conflict graphs, cycle classification and exchange scheduling"""

import pytest
from conftest import execution, r, s

from src.analysis import (
    CycleVerdict,
    build_conflict_graph,
    classify,
    conflict_graph_to_dot,
    is_k_synchronous_trace,
    schedule_k_exchanges,
)
from src.asynch import Execution, explore_async_traces, trace_of
from src.exceptions import ScheduleError, TheoremInapplicableError
from src.synch import replay_exchanges


def test_conflict_graph_edges(rs_cycle):
    """Test edges and their labels in the four-message cycle."""
    cg = build_conflict_graph(trace_of(rs_cycle))
    assert [(u.mid, v.mid) for u, v in cg.edges] == [(1, 2), (2, 3), (3, 4), (4, 1)]
    assert cg.labels(cg.node(1), cg.node(2)) == frozenset({"SS"})
    assert cg.labels(cg.node(2), cg.node(3)) == frozenset({"RS"})
    assert cg.labels(cg.node(3), cg.node(4)) == frozenset({"RR"})
    assert cg.labels(cg.node(4), cg.node(1)) == frozenset({"SR"})


def test_unmatched_send_is_a_node():
    """Test unmatched sends are nodes of their own."""
    cg = build_conflict_graph(trace_of(execution(s(1, "p", "q", "a"), s(2, "p", "q", "b"))))
    assert len(cg) == 2
    assert not cg.node(1).is_matched
    assert cg.node(1).label == "1:a!"


def test_bad_cycle_for_every_k(rs_cycle):
    """Test an RS edge inside a cycle fails whatever k is."""
    cg = build_conflict_graph(trace_of(rs_cycle))
    for k in range(1, 11):
        report = classify(cg, k)
        assert report.verdict is CycleVerdict.BAD
        assert [n.mid for n in report.cycle] == [2, 3, 4, 1]
        assert report.size == 4


def test_oversize_cycle(elevator_exec2):
    """Test the crosswise exchange is a cycle of size 2."""
    cg = build_conflict_graph(trace_of(elevator_exec2))
    report = classify(cg, 1)
    assert report.verdict is CycleVerdict.OVERSIZE
    assert sorted(n.mid for n in report.cycle) == [5, 6]
    assert report.size == 2
    assert report.scc_sizes == (2, 1, 1, 1, 1)
    assert classify(cg, 2).ok


def test_acyclic_trace(commit_exec):
    """Test the commit round has no cycle at all."""
    report = classify(build_conflict_graph(trace_of(commit_exec)), 1)
    assert report.ok
    assert report.scc_sizes == (1,) * 8
    assert report.to_dict() == {"verdict": "acyclic_or_good", "k": 1, "scc_sizes": [1] * 8}


def test_classify_rejects_k_zero(commit_exec):
    """Test k must be positive."""
    with pytest.raises(ValueError):
        classify(build_conflict_graph(trace_of(commit_exec)), 0)


def test_is_k_synchronous_trace(elevator_exec2):
    """Test the size-2 cycle needs k of at least 2."""
    t = trace_of(elevator_exec2)
    assert not is_k_synchronous_trace(t, 1)
    assert is_k_synchronous_trace(t, 2)


def test_k_synchronous_trace_is_monotone_in_k(elevator_exec2, rs_cycle, commit_exec, decid_ex):
    """Test a trace that is k-synchronous stays so for every larger k."""
    executions = [elevator_exec2, rs_cycle, commit_exec, *explore_async_traces(decid_ex, 2, 6)]
    changes = 0
    for e in executions:
        results = [is_k_synchronous_trace(trace_of(e), k) for k in range(1, 6)]
        assert results == sorted(results), str(e)
        changes += results[0] != results[-1]
    assert changes > 0


def test_classify_ignores_message_ids(elevator_exec2, rs_cycle, decid_ex):
    """Test renaming message ids changes neither the verdict nor the sizes."""
    executions = [elevator_exec2, rs_cycle, *explore_async_traces(decid_ex, 2, 6)]
    for e in executions:
        renamed = Execution(tuple(a.with_mid(10 * a.mid + 3) for a in e))
        for k in (1, 2, 3):
            before = classify(build_conflict_graph(trace_of(e)), k)
            after = classify(build_conflict_graph(trace_of(renamed)), k)
            assert after.verdict is before.verdict, str(e)
            assert after.size == before.size
            assert after.scc_sizes == before.scc_sizes
            if before.verdict is CycleVerdict.OVERSIZE:
                assert {n.mid for n in after.cycle} == {10 * n.mid + 3 for n in before.cycle}


def test_characterization_needs_causal_delivery():
    """Test traces without causal delivery are refused."""
    e = execution(
        s(1, "p", "q", "a"),
        s(2, "p", "r", "b"),
        r(2, "r", "b"),
        s(3, "r", "q", "c"),
        r(3, "q", "c"),
        r(1, "q", "a"),
    )
    with pytest.raises(TheoremInapplicableError):
        is_k_synchronous_trace(trace_of(e), 3)


def test_schedule_singletons(commit_exec):
    """Test an acyclic trace is scheduled one message per exchange."""
    blocks = schedule_k_exchanges(trace_of(commit_exec), 1)
    assert len(blocks) == 8
    assert all(len(b.sends) == 1 and len(b.receives) == 1 for b in blocks)
    assert [b.sends[0].mid for b in blocks] == list(range(1, 9))


def test_schedule_groups_cycle(elevator_exec2):
    """Test the cycle becomes one exchange holding both sends before both receives."""
    blocks = schedule_k_exchanges(trace_of(elevator_exec2), 2)
    assert len(blocks) == 5
    last = blocks[-1]
    assert [a.mid for a in last.sends] == [5, 6]
    assert [a.mid for a in last.receives] == [5, 6]
    assert replay_exchanges(blocks, 2).blocked == {}


def test_schedule_refuses_bad_cycle(rs_cycle):
    """Test no schedule exists for a bad cycle."""
    with pytest.raises(ScheduleError):
        schedule_k_exchanges(trace_of(rs_cycle), 4)


def test_schedule_with_unmatched_send():
    """Test an unmatched send to a process follows its matched sends."""
    e = execution(s(1, "p", "q", "a"), r(1, "q", "a"), s(2, "p", "q", "b"))
    blocks = schedule_k_exchanges(trace_of(e), 1)
    assert [str(b) for b in blocks] == ["[send1(p,q,a) rec1(q,a)]", "[send2(p,q,b)]"]


def test_dot_marks_witness(rs_cycle):
    """Test DOT output draws witness nodes red and RS edges bold."""
    cg = build_conflict_graph(trace_of(rs_cycle))
    dot = conflict_graph_to_dot(cg, classify(cg, 4), name="rs")
    assert dot.startswith('digraph "rs" {')
    assert 'n2 [label="2:v2", color=red, fontcolor=red];' in dot
    assert 'n2 -> n3 [label="RS", style=bold];' in dot
    assert 'n1 -> n2 [label="SS"];' in dot
