"""Pretty-printer for the system description DSL; parse_system(format_system(s)) == s."""

from .system import SystemSpec


def format_system(spec: SystemSpec) -> str:
    lines = [f"system {spec.name}", " ".join(["payloads", *spec.payloads])]
    for proc in spec:
        lines.append("")
        lines.append(f"process {proc.pid} initial {proc.initial}")
        for state in proc.states:
            lines.append(f"  state {state}")
            for t in proc.outgoing(state):
                if t.action.is_send:
                    lines.append(f"    send {t.action.payload} to {t.action.dest} goto {t.target}")
                else:
                    lines.append(f"    recv {t.action.payload} goto {t.target}")
        lines.append("end")
    return "\n".join(lines) + "\n"
