"""
Indexed actions and executions, plus their JSON form.

An execution step is an action tagged with a message id; a send and a
receive match when they carry the same id. JSON steps look like
{"kind": "send", "actor": "p", "dest": "q", "payload": "v", "mid": 1}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Optional, Union

from ..exceptions import MalformedTraceError
from ..model.system import Action, ActionKind

MessageId = int


@dataclass(frozen=True)
class IndexedAction:
    action: Action
    mid: MessageId

    @property
    def kind(self) -> ActionKind:
        return self.action.kind

    @property
    def is_send(self) -> bool:
        return self.action.is_send

    @property
    def proc(self) -> str:
        return self.action.actor

    @property
    def dest(self) -> Optional[str]:
        return self.action.dest

    @property
    def payload(self) -> str:
        return self.action.payload

    def with_mid(self, mid: MessageId) -> IndexedAction:
        return IndexedAction(self.action, mid)

    def __str__(self) -> str:
        if self.is_send:
            return f"send{self.mid}({self.proc},{self.dest},{self.payload})"
        return f"rec{self.mid}({self.proc},{self.payload})"


@dataclass(frozen=True)
class Execution:
    steps: tuple[IndexedAction, ...] = ()

    def __iter__(self) -> Iterator[IndexedAction]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def prefix(self, n: int) -> Execution:
        return Execution(self.steps[:n])

    def canonical(self) -> Execution:
        """Rename message ids 1, 2, ... in order of first appearance."""
        renaming: dict[int, int] = {}
        steps = []
        for step in self.steps:
            if step.mid not in renaming:
                renaming[step.mid] = len(renaming) + 1
            steps.append(step.with_mid(renaming[step.mid]))
        return Execution(tuple(steps))

    def __str__(self) -> str:
        return " ".join(str(step) for step in self.steps) or "ε"


def step_to_json(step: IndexedAction) -> dict[str, Any]:
    data: dict[str, Any] = {
        "kind": step.kind.value,
        "actor": step.proc,
        "payload": step.payload,
        "mid": step.mid,
    }
    if step.is_send:
        data["dest"] = step.dest
    return data


def step_from_json(data: Any) -> IndexedAction:
    if not isinstance(data, dict):
        raise MalformedTraceError(f"step is not an object: {data!r}")
    try:
        kind = ActionKind(data["kind"])
        dest = data.get("dest") if kind is ActionKind.SEND else None
        if kind is ActionKind.SEND and not dest:
            raise MalformedTraceError(f"send step without dest: {data}")
        action = Action(kind, str(data["actor"]), str(data["payload"]), dest and str(dest))
        return IndexedAction(action, int(data["mid"]))
    except (KeyError, ValueError, TypeError) as e:
        raise MalformedTraceError(f"malformed step {data}: {e}") from e


def execution_to_json(execution: Execution) -> dict[str, Any]:
    return {"steps": [step_to_json(step) for step in execution]}


def execution_from_json(data: Any) -> Execution:
    """
    Accepts {"steps": [...]} or a bare list of steps.

    Raises:
        MalformedTraceError: no step list, or a malformed step
    """
    steps = data.get("steps") if isinstance(data, dict) else data
    if not isinstance(steps, list):
        raise MalformedTraceError('expected a list of steps or an object with a "steps" list')
    return Execution(tuple(step_from_json(step) for step in steps))


def load_execution(path: Union[str, Path]) -> Execution:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise MalformedTraceError(f"{path}: invalid JSON: {e}") from e
    return execution_from_json(data)
