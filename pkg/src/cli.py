"""
Command-line front end.

Exit codes: 0 synchronizable (or nothing found), 1 violation (or something
found), 2 inconclusive (node cap hit, characterization inapplicable),
3 usage, parse or input errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, NoReturn, Optional

from pydantic import ValidationError

from . import config
from .analysis.conflict_graph import build_conflict_graph, classify, conflict_graph_to_dot
from .analysis.scheduling import schedule_k_exchanges
from .asynch.engine import explore_async_traces
from .asynch.execution import load_execution, step_to_json
from .asynch.trace import check_causal_delivery, trace_of
from .config import Command, OutputFormat, RunConfig
from .deadlock.detector import DeadlockKind, check_deadlock_witness, find_deadlocks
from .exceptions import FlowBoundError, NodeCapExceeded, SynchroError
from .instrument.checker import VerdictKind, check_k_synchronizability
from .instrument.flow import min_k_search
from .model.parser import load_system
from .report import (
    CORPUS_SCHEMA,
    DEADLOCK_SCHEMA,
    MIN_K_SCHEMA,
    ORACLE_SCHEMA,
    REACH_SCHEMA,
    REACHABILITY_GRAPH_SCHEMA,
    TRACE_SCHEMA,
    VERDICT_SCHEMA,
    validate_report,
)
from .report.render import (
    render_corpus_text,
    render_deadlocks_text,
    render_min_k_text,
    render_reach_text,
    render_trace_text,
    render_verdict_text,
    to_json,
)
from .synch.explorer import (
    explore_sync,
    reachability_graph_to_dot,
    reachability_graph_to_json,
    sync_reach_local,
)
from .utils.logging_config import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

VERDICT_EXIT = {
    VerdictKind.SYNCHRONIZABLE: EXIT_OK,
    VerdictKind.VIOLATION: EXIT_VIOLATION,
    VerdictKind.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class SynchroArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with EXIT_USAGE instead of argparse's 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def run_config(args: argparse.Namespace, command: Command, **fields: Any) -> RunConfig:
    return RunConfig(
        command=command,
        node_cap=args.node_cap,
        jobs=args.jobs,
        output_format=OutputFormat(args.output_format),
        **fields,
    )


def emit(
    run: RunConfig, data: dict[str, Any], schema: dict[str, Any], text: str, dot: str = ""
) -> None:
    """Print one report in the run's output format; JSON is validated first."""
    if run.output_format is OutputFormat.JSON:
        validate_report(data, schema)
        sys.stdout.write(to_json(data))
    elif run.output_format is OutputFormat.DOT:
        sys.stdout.write(dot)
    else:
        sys.stdout.write(text)


def cmd_check(args: argparse.Namespace) -> int:
    run = run_config(args, Command.CHECK, input=args.model, k=args.k)
    assert run.k is not None
    spec = load_system(args.model)
    verdict = check_k_synchronizability(spec, run.k, cap=run.node_cap, jobs=run.jobs)
    dot = ""
    if verdict.counterexample is not None:
        cg = build_conflict_graph(trace_of(verdict.counterexample))
        dot = conflict_graph_to_dot(cg, verdict.cycle, name=f"{spec.name}_k{run.k}")
    emit(run, verdict.to_dict(), VERDICT_SCHEMA, render_verdict_text(verdict, spec.name), dot)
    return VERDICT_EXIT[verdict.result]


def cmd_min_k(args: argparse.Namespace) -> int:
    run = run_config(args, Command.MIN_K, input=args.model, k_cap=args.k_cap)
    spec = load_system(args.model)
    result = min_k_search(spec, run.k_cap, cap=run.node_cap, jobs=run.jobs)
    emit(run, result.to_dict(), MIN_K_SCHEMA, render_min_k_text(result, spec.name))
    return VERDICT_EXIT[result.verdict.result]


def cmd_deadlock(args: argparse.Namespace) -> int:
    run = run_config(args, Command.DEADLOCK, input=args.model, k=args.k)
    assert run.k is not None
    spec = load_system(args.model)
    selected = [DeadlockKind(kind) for kind in args.kinds or ()] or list(DeadlockKind)

    synchronizable: Optional[bool] = None
    if not args.no_check:
        verdict = check_k_synchronizability(spec, run.k, cap=run.node_cap, jobs=run.jobs)
        synchronizable = verdict.is_synchronizable
        if not synchronizable:
            print(
                f"Warning: {spec.name} is not known to be {run.k}-synchronizable ({verdict}); "
                "deadlock results may be unsound",
                file=sys.stderr,
            )

    reports = find_deadlocks(spec, run.k, selected, cap=run.node_cap, jobs=run.jobs)
    for report in reports:
        if not check_deadlock_witness(spec, report, run.k):
            logger.error(f"{report.kind.value} witness failed the independent check")
    data = {
        "k": run.k,
        "synchronizable": synchronizable,
        "reports": [r.to_dict() for r in reports],
    }
    text = render_deadlocks_text(
        reports, run.k, spec.name, [kind.value for kind in selected], synchronizable
    )
    emit(run, data, DEADLOCK_SCHEMA, text)
    return EXIT_VIOLATION if reports else EXIT_OK


def cmd_reach(args: argparse.Namespace) -> int:
    run = run_config(args, Command.REACH, input=args.model, k=args.k)
    assert run.k is not None
    spec = load_system(args.model)
    result = sync_reach_local(spec, run.k, args.pid, args.state, cap=run.node_cap, jobs=run.jobs)
    data: dict[str, Any] = {
        "k": run.k,
        "process": args.pid,
        "state": args.state,
        "reachable": result.reachable,
        "stats": {"configs": result.configs, "time_ms": round(result.time_ms)},
    }
    if result.witness is not None:
        data["witness"] = {"steps": [step_to_json(a) for a in result.witness]}
    text = render_reach_text(result, run.k, spec.name, args.pid, args.state)
    emit(run, data, REACH_SCHEMA, text)
    return EXIT_OK if result.reachable else EXIT_VIOLATION


def cmd_trace(args: argparse.Namespace) -> int:
    run = run_config(args, Command.TRACE, input=args.trace_file, k=args.k)
    assert run.k is not None
    t = trace_of(load_execution(args.trace_file))
    delivery = check_causal_delivery(t)
    cg = build_conflict_graph(t)
    report = classify(cg, run.k)
    schedule = schedule_k_exchanges(t, run.k) if delivery.holds and report.ok else None

    data: dict[str, Any] = {
        "k": run.k,
        "causal_delivery": delivery.holds,
        "k_synchronous": report.ok if delivery.holds else None,
        **{key: value for key, value in report.to_dict().items() if key != "k"},
    }
    if schedule is not None:
        data["schedule"] = [[str(a) for a in block.steps] for block in schedule]
    dot = conflict_graph_to_dot(cg, report, name=args.trace_file.stem)
    text = render_trace_text(delivery, report, schedule) + "\n" + dot
    emit(run, data, TRACE_SCHEMA, text, dot)
    if not delivery.holds:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_explore(args: argparse.Namespace) -> int:
    run = run_config(args, Command.EXPLORE, input=args.model, k=args.k)
    assert run.k is not None
    spec = load_system(args.model)
    graph = explore_sync(spec, run.k, cap=run.node_cap, jobs=run.jobs)
    text = (
        f"{spec.name}, k={run.k}: {len(graph.configs)} configurations, "
        f"{len(graph.edges)} transitions\n"
    )
    emit(
        run,
        reachability_graph_to_json(graph),
        REACHABILITY_GRAPH_SCHEMA,
        text,
        reachability_graph_to_dot(graph),
    )
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    run = run_config(
        args,
        Command.ORACLE,
        input=args.model,
        k=args.k,
        buffer_bound=args.buffer_bound,
        depth_bound=args.depth_bound,
    )
    assert run.k is not None
    spec = load_system(args.model)
    executions = explore_async_traces(spec, run.buffer_bound, run.depth_bound)
    failing = []
    for execution in executions:
        report = classify(build_conflict_graph(trace_of(execution)), run.k)
        if not report.ok:
            failing.append((execution, report))
    data: dict[str, Any] = {
        "k": run.k,
        "traces": len(executions),
        "failing": len(failing),
    }
    lines = [
        f"{spec.name}: {len(executions)} traces "
        f"(buffer {run.buffer_bound}, depth {run.depth_bound})",
        f"{'[+]' if not failing else '[-]'} {len(failing)} not {run.k}-synchronous",
    ]
    if failing:
        execution, report = failing[0]
        data["first_failing"] = {"steps": [step_to_json(a) for a in execution], **report.to_dict()}
        lines += [f"    {execution}", f"    {report}"]
    emit(run, data, ORACLE_SCHEMA, "\n".join(lines) + "\n")
    return EXIT_VIOLATION if failing else EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    run = run_config(args, Command.CORPUS, input=args.directory, k_cap=args.k_cap)
    rows: list[tuple[str, str, bool]] = []
    entries = []
    for path in sorted(args.directory.glob("*.mps")):
        spec = load_system(path)
        try:
            result = min_k_search(spec, None, cap=run.node_cap, jobs=run.jobs)
        except FlowBoundError:
            logger.info(f"{path.name}: not flow-bounded, trying k up to {run.k_cap}")
            result = min_k_search(spec, run.k_cap, cap=run.node_cap, jobs=run.jobs)
        verdict = result.verdict
        if verdict.result is VerdictKind.SYNCHRONIZABLE:
            outcome = f"{verdict.k}-synchronizable"
        elif verdict.result is VerdictKind.VIOLATION:
            outcome = "not synchronizable (bad cycle)"
        else:
            outcome = f"inconclusive up to k={result.k_cap}"
        rows.append((path.name, outcome, verdict.is_synchronizable))
        entries.append(
            {
                "model": path.name,
                "result": verdict.result.value,
                "k": verdict.k,
                "cap_source": "auto" if result.auto_cap else "user",
            }
        )
    emit(run, {"models": entries}, CORPUS_SCHEMA, render_corpus_text(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = SynchroArgumentParser(
        prog="synchro", description="Check k-synchronizability of message-passing systems."
    )
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="Logging level")
    parser.add_argument("--log-file", default=config.LOG_FILE, help="Also log to this file")
    parser.add_argument(
        "--node-cap",
        type=int,
        default=config.NODE_CAP,
        help="Maximum configurations per exploration (SYNCHRO_NODE_CAP)",
    )
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes")
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TEXT.value,
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(
        name: str, handler: Callable[[argparse.Namespace], int], summary: str, needs_k: bool = True
    ) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=summary, description=summary)
        sub.set_defaults(handler=handler)
        if needs_k:
            sub.add_argument("-k", type=int, required=True, help="Exchange bound k (>= 1)")
        return sub

    sub = command("check", cmd_check, "Decide whether MODEL is k-synchronizable.")
    sub.add_argument("model", type=Path)

    sub = command("min-k", cmd_min_k, "Find the least k making MODEL k-synchronizable.", False)
    sub.add_argument("model", type=Path)
    sub.add_argument("--cap", dest="k_cap", type=int, default=None, help="Largest k to try")

    sub = command(
        "deadlock", cmd_deadlock, "Look for deadlocks of MODEL in its k-synchronous executions."
    )
    sub.add_argument("model", type=Path)
    sub.add_argument(
        "--kind",
        dest="kinds",
        action="append",
        choices=[kind.value for kind in DeadlockKind],
        help="Deadlock class to look for (repeatable; all by default)",
    )
    sub.add_argument("--no-check", action="store_true", help="Skip the k-synchronizability check")

    sub = command(
        "reach", cmd_reach, "Is a local state reachable in a k-synchronous execution of MODEL?"
    )
    sub.add_argument("model", type=Path)
    sub.add_argument("-p", "--process", dest="pid", required=True, help="Process id")
    sub.add_argument("-s", "--state", required=True, help="Local state of that process")

    sub = command("trace", cmd_trace, "Decide whether the trace in TRACE_FILE is k-synchronous.")
    sub.add_argument("trace_file", type=Path)

    sub = command("explore", cmd_explore, "Print the k-synchronous reachability graph of MODEL.")
    sub.add_argument("model", type=Path)

    sub = command(
        "oracle", cmd_oracle, "Check every bounded asynchronous trace of MODEL against k-synchrony."
    )
    sub.add_argument("model", type=Path)
    sub.add_argument("--buffer-bound", type=int, default=config.DEFAULT_BUFFER_BOUND)
    sub.add_argument("--depth-bound", type=int, default=config.DEFAULT_DEPTH_BOUND)

    sub = command(
        "corpus",
        cmd_corpus,
        "Run min-k on every .mps model in DIRECTORY (the bundled corpus by default).",
        False,
    )
    sub.add_argument("directory", type=Path, nargs="?", default=config.MODELS_PATH)
    sub.add_argument(
        "--k-cap",
        type=int,
        default=config.DEFAULT_K_CAP,
        help="Cap on k for models that are not flow-bounded",
    )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.log_level, args.log_file, json_format=config.LOG_FORMAT == "json")
    try:
        return args.handler(args)
    except NodeCapExceeded as e:
        print(f"Inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValidationError as e:
        for error in e.errors():
            print(f"Error: {error['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except (SynchroError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
