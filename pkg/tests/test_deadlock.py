"""Tests for deadlock detection through the k-synchronous semantics"""

import pytest
from conftest import execution, s

from src.asynch import explore_async_traces, replay_async, trace_of
from src.deadlock import (
    DeadlockKind,
    check_deadlock_witness,
    find_deadlocks,
    find_empty_buffer_deadlock,
    find_orphan_message,
    find_unspecified_reception,
    min_unmatched,
)


def test_mutual_wait_deadlocks_at_start(mutual_wait):
    """Test both processes waiting on each other is found with an empty witness."""
    report = find_empty_buffer_deadlock(mutual_wait, 1)
    assert report is not None
    assert report.kind is DeadlockKind.EMPTY_BUFFER
    assert len(report.witness) == 0
    assert report.detail == {"waiting": ["p", "q"], "locals": {"p": "P0", "q": "Q0"}}
    assert check_deadlock_witness(mutual_wait, report, 1)


def test_orphan_message(orphan):
    """Test a message nobody receives while every process is final."""
    report = find_orphan_message(orphan, 1)
    assert report is not None
    assert str(report.witness) == "send1(s,r,v)"
    assert report.detail == {"unmatched": ["send1(s,r,v)"]}
    assert check_deadlock_witness(orphan, report, 1)


def test_unspecified_reception(unspecified):
    """Test a waiting process that cannot accept the message addressed to it."""
    report = find_unspecified_reception(unspecified, 1)
    assert report is not None
    assert report.detail == {
        "process": "r",
        "state": "R0",
        "accepts": ["a"],
        "offending": ["b"],
    }
    assert check_deadlock_witness(unspecified, report, 1)


def async_empty_buffer_deadlocks(spec, buffer_bound, depth_bound):
    """Local states of bounded asynchronous runs that end with empty buffers and nobody enabled."""
    stuck = set()
    for e in explore_async_traces(spec, buffer_bound, depth_bound):
        for c in replay_async(spec, e):
            if any(c.buffers):
                continue
            receiving = [p.is_receiving(state) for p, state in zip(spec.processes, c.locals)]
            final = [p.is_final(state) for p, state in zip(spec.processes, c.locals)]
            if any(receiving) and all(r or f for r, f in zip(receiving, final)):
                stuck.add(c.locals)
    return stuck


@pytest.mark.parametrize("name", ["mutual_wait", "orphan", "unspecified", "commit"])
def test_empty_buffer_deadlock_matches_async_search(request, name):
    """Test the k-synchronous detector agrees with a bounded asynchronous search."""
    spec = request.getfixturevalue(name)
    stuck = async_empty_buffer_deadlocks(spec, 2, 16)
    report = find_empty_buffer_deadlock(spec, 1)
    assert (report is not None) == bool(stuck)
    if report is not None:
        assert tuple(report.detail["locals"][pid] for pid in spec.pids) in stuck
        assert replay_async(spec, report.witness)


def test_commit_has_no_deadlock(commit):
    """Test the commit protocol is deadlock free at k=1."""
    assert find_deadlocks(commit, 1) == []


def test_find_deadlocks_selected_kinds(mutual_wait, orphan):
    """Test only the selected detectors run, in kind order."""
    assert find_deadlocks(mutual_wait, 1, [DeadlockKind.ORPHAN]) == []
    reports = find_deadlocks(orphan, 1)
    assert [r.kind for r in reports] == [DeadlockKind.ORPHAN]


def test_report_to_dict(orphan):
    """Test the JSON form of a report."""
    report = find_orphan_message(orphan, 1)
    assert report is not None
    assert report.to_dict() == {
        "kind": "orphan",
        "witness": {
            "steps": [{"kind": "send", "actor": "s", "dest": "r", "payload": "v", "mid": 1}]
        },
        "detail": {"unmatched": ["send1(s,r,v)"]},
    }


def test_witness_check_rejects_wrong_kind(orphan):
    """Test a witness does not pass the predicate of another kind."""
    report = find_orphan_message(orphan, 1)
    assert report is not None
    relabeled = type(report)(DeadlockKind.EMPTY_BUFFER, report.witness, report.labels)
    assert not check_deadlock_witness(orphan, relabeled, 1)


def test_min_unmatched():
    """Test only the causally first unmatched message to a process is minimal."""
    t = trace_of(execution(s(1, "p", "q", "a"), s(2, "p", "q", "b"), s(3, "r", "q", "c")))
    assert {a.mid for a in min_unmatched(t, "q")} == {1, 3}
