"""Shared fixtures: the bundled corpus and small helpers for building executions"""

import pytest

from src import config
from src.asynch.execution import Execution, IndexedAction, load_execution
from src.model.parser import load_system
from src.model.system import recv, send


def load_model(name: str):
    return load_system(config.MODELS_PATH / f"{name}.mps")


def load_trace(name: str) -> Execution:
    return load_execution(config.MODELS_PATH / f"{name}.trace")


def s(mid: int, proc: str, dest: str, payload: str) -> IndexedAction:
    return IndexedAction(send(proc, dest, payload), mid)


def r(mid: int, proc: str, payload: str) -> IndexedAction:
    return IndexedAction(recv(proc, payload), mid)


def execution(*steps: IndexedAction) -> Execution:
    return Execution(tuple(steps))


@pytest.fixture
def commit():
    """Two-phase commit with two nodes."""
    return load_model("commit")


@pytest.fixture
def elevator():
    return load_model("elevator")


@pytest.fixture
def elevator_dashed():
    return load_model("elevator_dashed")


@pytest.fixture
def producer_consumer():
    return load_model("producer_consumer")


@pytest.fixture
def decid_ex():
    return load_model("decid_ex")


@pytest.fixture
def mutual_wait():
    return load_model("mutual_wait")


@pytest.fixture
def orphan():
    return load_model("orphan")


@pytest.fixture
def unspecified():
    return load_model("unspecified")


@pytest.fixture
def replication():
    return load_model("replication")


@pytest.fixture
def rs_cycle():
    """Four messages whose conflict graph is one cycle through an RS edge."""
    return load_trace("rs_cycle")


@pytest.fixture
def commit_exec():
    return load_trace("commit_exec")


@pytest.fixture
def elevator_exec2():
    """Door and elevator exchange open/doorOpened crosswise: a cycle of size 2."""
    return load_trace("elevator_exec2")
