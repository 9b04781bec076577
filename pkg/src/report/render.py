"""
Report rendering: JSON for machines, a bannered text report for people.

JSON output is sorted and indented so identical results print identically.
"""

import json
from typing import Any, Iterable, Optional

from ..analysis.conflict_graph import CycleReport
from ..asynch.trace import CausalDeliveryVerdict
from ..deadlock.detector import DeadlockReport
from ..instrument.checker import SynchronizabilityVerdict, VerdictKind
from ..instrument.flow import MinKResult
from ..synch.exchange import ExchangeLabel
from ..synch.explorer import ReachResult

BANNER = "=" * 60


def to_json(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _framed(title: str, body: list[str]) -> str:
    return "\n".join(["", BANNER, title, BANNER, *body, BANNER, ""]) + "\n"


def _mark(ok: bool) -> str:
    return "[+]" if ok else "[-]"


def render_verdict_text(verdict: SynchronizabilityVerdict, system: str) -> str:
    body = [
        f"System: {system}",
        f"k: {verdict.k}",
        "",
        f"{_mark(verdict.is_synchronizable)} {verdict}",
    ]
    if verdict.counterexample is not None:
        body += ["", "Counterexample:"] + [f"    {step}" for step in verdict.counterexample]
    body += ["", f"Configurations: {verdict.configs}", f"Time: {verdict.time_ms:.0f} ms"]
    return _framed("SYNCHRONIZABILITY REPORT", body)


def render_min_k_text(result: MinKResult, system: str) -> str:
    body = [f"System: {system}", "", "Flow bounds:"]
    for pid, bounds in result.bounds.items():
        b = bounds.to_dict()
        body.append(f"    {pid}: receive {b['receive_bound']}, send {b['send_bound']}")
    body.append(f"k cap: {result.k_cap} ({'auto' if result.auto_cap else 'user'})")
    body.append("")
    for attempt in result.attempts:
        body.append(f"{_mark(attempt.is_synchronizable)} k={attempt.k}: {attempt.result.value}")
    body.append("")
    verdict = result.verdict
    if verdict.result is VerdictKind.SYNCHRONIZABLE:
        body.append(f"Result: {verdict.k}-synchronizable")
    elif verdict.result is VerdictKind.VIOLATION:
        body.append(f"Result: not synchronizable for any k ({verdict.cycle})")
    else:
        body.append(f"Result: inconclusive ({verdict.reason})")
    return _framed("MIN-K REPORT", body)


def render_deadlocks_text(
    reports: list[DeadlockReport],
    k: int,
    system: str,
    kinds: Iterable[str],
    synchronizable: Optional[bool] = None,
) -> str:
    body = [f"System: {system}", f"k: {k}"]
    if synchronizable is False:
        body.append(f"Warning: not {k}-synchronizable, results may be unsound")
    body.append("")
    found = {r.kind.value: r for r in reports}
    for kind in kinds:
        report = found.get(kind)
        body.append(f"{_mark(report is None)} {kind}: {'found' if report else 'none'}")
        if report is not None:
            for key, value in report.detail.items():
                body.append(f"    {key}: {value}")
            body.append(f"    witness: {report.witness}")
    return _framed("DEADLOCK REPORT", body)


def render_reach_text(result: ReachResult, k: int, system: str, pid: str, state: str) -> str:
    body = [
        f"System: {system}",
        f"k: {k}",
        "",
        f"{_mark(result.reachable)} {pid} in {state}: "
        + ("reachable" if result.reachable else "unreachable"),
    ]
    if result.reachable:
        body += ["", "Exchanges:"] + [f"    {label}" for label in result.labels]
    body += ["", f"Configurations: {result.configs}"]
    return _framed("REACHABILITY REPORT", body)


def render_trace_text(
    delivery: CausalDeliveryVerdict,
    report: CycleReport,
    schedule: Optional[list[ExchangeLabel]],
) -> str:
    body = [
        f"k: {report.k}",
        "",
        f"{_mark(delivery.holds)} {delivery}",
        f"{_mark(report.ok)} {report}",
        f"    component sizes: {list(report.scc_sizes)}",
    ]
    if not delivery.holds:
        body.append("    the conflict-graph characterization does not apply")
    elif report.ok:
        body.append(f"{_mark(True)} {report.k}-synchronous")
    else:
        body.append(f"{_mark(False)} not {report.k}-synchronous")
    if schedule:
        body += ["", "Exchanges:"] + [f"    {label}" for label in schedule]
    return _framed("TRACE REPORT", body)


def render_corpus_text(rows: list[tuple[str, str, bool]]) -> str:
    """rows are (model, outcome, ok)."""
    body = [f"{_mark(ok)} {model}: {outcome}" for model, outcome, ok in rows]
    passed = sum(1 for _, _, ok in rows if ok)
    body += ["", f"Summary: {passed}/{len(rows)} synchronizable"]
    return _framed("CORPUS REPORT", body)
