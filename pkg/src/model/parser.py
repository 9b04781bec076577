"""
Parser for the system description DSL.

    system <name>
    payloads v1 v2 ...
    process <pid> initial <state>
      state <state>
        send <payload> to <pid> goto <state>
        recv <payload> goto <state>
    end

'#' starts a comment running to the end of the line; one action per line.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from ..config import RELAY_PROCESS
from ..exceptions import ReservedNameError, SpecSyntaxError, SpecValidationError
from .system import ProcessDef, SystemSpec, Transition, recv, send
from .validation import validate_system

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start: _NL* system_decl payloads_decl process_decl*

system_decl: "system" NAME _NL
payloads_decl: "payloads" NAME* _NL
process_decl: "process" NAME "initial" NAME _NL state_decl* "end" _NL?
state_decl: "state" NAME _NL action_line*
?action_line: send_line | recv_line
send_line: "send" NAME "to" NAME "goto" NAME _NL
recv_line: "recv" NAME "goto" NAME _NL

NAME: /[A-Za-z_][A-Za-z0-9_]*/
COMMENT: /#[^\n]*/
_NL: /(\r?\n[\t ]*(#[^\n]*)?)+/

%import common.WS_INLINE
%ignore WS_INLINE
%ignore COMMENT
"""

_parser = Lark(GRAMMAR, parser="lalr", propagate_positions=True)


@dataclass
class _ActionLine:
    is_send: bool
    payload: Token
    dest: Union[Token, None]
    target: Token


@dataclass
class _StateBlock:
    name: Token
    actions: list[_ActionLine]


@dataclass
class _ProcessBlock:
    pid: Token
    initial: Token
    states: list[_StateBlock]


@v_args(inline=True)
class _SpecBuilder(Transformer):
    """Turns the parse tree into plain records; names keep their tokens for error locations."""

    def system_decl(self, name):
        return name

    def payloads_decl(self, *names):
        return list(names)

    def send_line(self, payload, dest, target):
        return _ActionLine(True, payload, dest, target)

    def recv_line(self, payload, target):
        return _ActionLine(False, payload, None, target)

    def state_decl(self, name, *actions):
        return _StateBlock(name, list(actions))

    def process_decl(self, pid, initial, *states):
        return _ProcessBlock(pid, initial, list(states))

    def start(self, name, payloads, *processes):
        return name, payloads, list(processes)


def _fail(message: str, token: Token) -> SpecValidationError:
    return SpecValidationError(message, token.line, token.column)


def _check_name(token: Token) -> None:
    if str(token) == RELAY_PROCESS:
        raise ReservedNameError(
            f"process name '{RELAY_PROCESS}' is reserved", token.line, token.column
        )


def _build(name: Token, payloads: list[Token], blocks: list[_ProcessBlock]) -> SystemSpec:
    declared_payloads: list[str] = []
    for token in payloads:
        if str(token) in declared_payloads:
            raise _fail(f"payload '{token}' declared twice", token)
        declared_payloads.append(str(token))

    pids: set[str] = set()
    for block in blocks:
        _check_name(block.pid)
        if str(block.pid) in pids:
            raise _fail(f"duplicate process '{block.pid}'", block.pid)
        pids.add(str(block.pid))

    processes = []
    for block in blocks:
        states: list[str] = []
        for state in block.states:
            if str(state.name) in states:
                raise _fail(f"duplicate state '{state.name}' in process '{block.pid}'", state.name)
            states.append(str(state.name))
        if str(block.initial) not in states:
            raise _fail(
                f"undeclared state '{block.initial}' in process '{block.pid}'", block.initial
            )

        transitions = []
        for state in block.states:
            for line in state.actions:
                if str(line.payload) not in declared_payloads:
                    raise _fail(f"undeclared payload '{line.payload}'", line.payload)
                if str(line.target) not in states:
                    raise _fail(
                        f"undeclared state '{line.target}' in process '{block.pid}'", line.target
                    )
                if line.is_send:
                    assert line.dest is not None
                    _check_name(line.dest)
                    if str(line.dest) not in pids:
                        raise _fail(f"undeclared process '{line.dest}'", line.dest)
                    action = send(str(block.pid), str(line.dest), str(line.payload))
                else:
                    action = recv(str(block.pid), str(line.payload))
                transitions.append(Transition(str(state.name), action, str(line.target)))

        processes.append(
            ProcessDef(str(block.pid), str(block.initial), tuple(states), tuple(transitions))
        )

    return SystemSpec(str(name), tuple(declared_payloads), tuple(processes))


def parse_system(text: str) -> SystemSpec:
    """
    Parse a system description.

    Args:
        text: DSL source

    Returns:
        SystemSpec: the described system

    Raises:
        SpecSyntaxError: text does not follow the grammar
        SpecValidationError: undeclared, duplicate or reserved names
    """
    if not text.endswith("\n"):
        text += "\n"
    try:
        tree = _parser.parse(text)
    except UnexpectedEOF as e:
        lines = text.splitlines()
        raise SpecSyntaxError("unexpected end of input", len(lines), len(lines[-1]) + 1) from e
    except UnexpectedCharacters as e:
        raise SpecSyntaxError(f"unexpected character {e.char!r}", e.line, e.column) from e
    except UnexpectedInput as e:
        token = getattr(e, "token", None)
        raise SpecSyntaxError(f"unexpected token {str(token)!r}", e.line, e.column) from e

    try:
        name, payloads, blocks = _SpecBuilder().transform(tree)
    except VisitError as e:
        raise e.orig_exc from e

    spec = _build(name, payloads, blocks)
    for diagnostic in validate_system(spec):
        logger.warning(f"{spec.name}: {diagnostic.message}")
    return spec


def load_system(path: Union[str, Path]) -> SystemSpec:
    """Read and parse a UTF-8 system description file."""
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line = raw.count(b"\n", 0, e.start) + 1
        column = e.start - (raw.rfind(b"\n", 0, e.start) + 1) + 1
        raise SpecSyntaxError(f"invalid UTF-8 byte {raw[e.start]:#04x}", line, column) from e
    return parse_system(text)
