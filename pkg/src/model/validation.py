"""Structural validation of system descriptions built outside the parser."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import networkx as nx

from ..exceptions import SpecValidationError
from .system import SystemSpec


class Severity(str, Enum):
    WARNING = "warning"
    ERROR = "error"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    process: str
    message: str


def validate_system(spec: SystemSpec) -> list[Diagnostic]:
    """
    Check the structural invariants of a SystemSpec.

    Errors (duplicate names, dangling references) raise; softer findings come
    back as warnings: self-sends and states unreachable from the initial state.

    Args:
        spec: System to check

    Returns:
        list: warning diagnostics, in process order

    Raises:
        SpecValidationError: on the first structural error
    """
    if len(set(spec.pids)) != len(spec.pids):
        raise SpecValidationError(f"duplicate process names in system {spec.name}")

    payloads = set(spec.payloads)
    pids = set(spec.pids)
    warnings: list[Diagnostic] = []

    for proc in spec:
        states = set(proc.states)
        if len(states) != len(proc.states):
            raise SpecValidationError(f"duplicate states in process {proc.pid}")
        if proc.initial not in states:
            raise SpecValidationError(f"initial state {proc.initial} of {proc.pid} is undeclared")

        graph = nx.DiGraph()
        graph.add_nodes_from(proc.states)
        for t in proc.transitions:
            if t.action.actor != proc.pid:
                raise SpecValidationError(f"transition of {proc.pid} performed by {t.action.actor}")
            if t.source not in states or t.target not in states:
                raise SpecValidationError(f"transition {t} of {proc.pid} uses an undeclared state")
            if t.action.payload not in payloads:
                raise SpecValidationError(f"undeclared payload {t.action.payload} in {proc.pid}")
            if t.action.is_send:
                if t.action.dest not in pids:
                    raise SpecValidationError(f"undeclared process {t.action.dest} in {proc.pid}")
                if t.action.dest == proc.pid:
                    warnings.append(
                        Diagnostic(
                            Severity.WARNING,
                            proc.pid,
                            f"self-send of {t.action.payload} in state {t.source} of {proc.pid}",
                        )
                    )
            graph.add_edge(t.source, t.target)

        unreachable = states - nx.descendants(graph, proc.initial) - {proc.initial}
        for state in sorted(unreachable):
            warnings.append(
                Diagnostic(
                    Severity.WARNING, proc.pid, f"state {state} of {proc.pid} is unreachable"
                )
            )

    return warnings
