"""Randomized cross-checks of the characterization and the checker against bounded exploration"""

import random
from functools import cache

import pytest

from src.analysis import (
    build_conflict_graph,
    classify,
    is_k_synchronous_trace,
    schedule_k_exchanges,
)
from src.asynch import (
    Execution,
    check_causal_delivery,
    explore_async_traces,
    replay_async,
    trace_of,
)
from src.exceptions import NodeCapExceeded
from src.instrument import VerdictKind, check_k_synchronizability
from src.model import ProcessDef, SystemSpec, Transition, recv, send, validate_system
from src.synch import execution_of, explore_sync, replay_exchanges

PAYLOADS = ("a", "b")
SEEDS = range(200)
KS = (1, 2, 3)
BUFFER_BOUND = 3
DEPTH_BOUND = 12
CAP = 20000


def random_system(rng: random.Random, n: int) -> SystemSpec:
    pids = [f"p{i}" for i in range(n)]
    processes = []
    for pid in pids:
        states = tuple(f"{pid}s{j}" for j in range(rng.randint(2, 4)))
        transitions = []
        for state in states:
            for _ in range(rng.randint(0, 2)):
                payload = rng.choice(PAYLOADS)
                target = rng.choice(states)
                if rng.random() < 0.5:
                    dest = rng.choice([q for q in pids if q != pid])
                    action = send(pid, dest, payload)
                else:
                    action = recv(pid, payload)
                transitions.append(Transition(state, action, target))
        processes.append(ProcessDef(pid, states[0], states, tuple(dict.fromkeys(transitions))))
    return SystemSpec(f"random{n}", PAYLOADS, tuple(processes))


@cache
def seeded_system(seed: int) -> SystemSpec:
    rng = random.Random(seed)
    spec = random_system(rng, rng.randint(2, 3))
    validate_system(spec)
    return spec


@cache
def bounded_traces(seed: int) -> tuple[Execution, ...]:
    return tuple(explore_async_traces(seeded_system(seed), BUFFER_BOUND, DEPTH_BOUND))


@pytest.mark.slow
@pytest.mark.parametrize("seed", SEEDS)
def test_bounded_traces_satisfy_causal_delivery(seed):
    """Test every bounded asynchronous trace of a random system has causal delivery."""
    for execution in bounded_traces(seed):
        assert check_causal_delivery(trace_of(execution)).holds, str(execution)


@pytest.mark.slow
@pytest.mark.parametrize("seed", SEEDS)
def test_k_synchronous_executions_have_k_synchronous_traces(seed):
    """Test every path of the k-synchronous reachability graph yields a k-synchronous trace."""
    spec = seeded_system(seed)
    for k in KS:
        try:
            graph = explore_sync(spec, k, cap=CAP)
        except NodeCapExceeded:
            continue
        for source, label, _ in graph.edges:
            execution = execution_of(graph.labels_to(source) + [label])
            assert is_k_synchronous_trace(trace_of(execution), k), f"k={k}: {execution}"


@pytest.mark.slow
@pytest.mark.parametrize("seed", SEEDS)
def test_k_synchronous_traces_replay_as_exchanges(seed):
    """Test k-synchronous bounded traces schedule into exchanges with the same trace."""
    spec = seeded_system(seed)
    for execution in bounded_traces(seed):
        t = trace_of(execution)
        for k in KS:
            if not is_k_synchronous_trace(t, k):
                continue
            blocks = schedule_k_exchanges(t, k)
            assert replay_exchanges(blocks, k, spec).locals
            replayed = trace_of(execution_of(blocks))
            assert replayed.canonical_key() == t.canonical_key(), f"k={k}: {execution}"


@pytest.mark.slow
@pytest.mark.parametrize("seed", SEEDS)
def test_checker_agrees_with_bounded_oracle(seed):
    """Test verdicts against every bounded asynchronous trace of a random system."""
    spec = seeded_system(seed)
    for k in KS:
        verdict = check_k_synchronizability(spec, k, cap=CAP)
        if verdict.result is VerdictKind.INCONCLUSIVE:
            continue

        if verdict.result is VerdictKind.VIOLATION:
            assert verdict.counterexample is not None
            assert replay_async(spec, verdict.counterexample)
            failing = trace_of(verdict.counterexample)
            assert not classify(build_conflict_graph(failing), k).ok
            continue

        for execution in bounded_traces(seed):
            report = classify(build_conflict_graph(trace_of(execution)), k)
            assert report.ok, f"k={k}: {execution}: {report}"
