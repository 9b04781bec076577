"""JSON schemas (draft 2020-12) of every report the CLI prints."""

from typing import Any

from jsonschema import Draft202012Validator

_STEP = {
    "type": "object",
    "required": ["kind", "actor", "payload", "mid"],
    "properties": {
        "kind": {"enum": ["send", "recv"]},
        "actor": {"type": "string"},
        "dest": {"type": "string"},
        "payload": {"type": "string"},
        "mid": {"type": "integer", "minimum": 1},
    },
}

_EXECUTION = {
    "type": "object",
    "required": ["steps"],
    "properties": {"steps": {"type": "array", "items": {"$ref": "#/$defs/step"}}},
}

_BOUND = {"anyOf": [{"type": "integer", "minimum": 0}, {"const": "unbounded"}]}

_DEFS = {"step": _STEP, "execution": _EXECUTION, "bound": _BOUND}

VERDICT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": _DEFS,
    "type": "object",
    "required": ["result", "k", "stats"],
    "properties": {
        "result": {"enum": ["synchronizable", "violation", "inconclusive"]},
        "k": {"type": "integer", "minimum": 1},
        "counterexample": {"$ref": "#/$defs/execution"},
        "cycle": {"type": "array", "items": {"type": "integer"}},
        "cycle_kind": {"enum": ["bad_cycle", "oversize_cycle"]},
        "cycle_size": {"type": "integer", "minimum": 1},
        "reason": {"type": "string"},
        "stats": {
            "type": "object",
            "required": ["configs", "time_ms"],
            "properties": {
                "configs": {"type": "integer", "minimum": 0},
                "time_ms": {"type": "number", "minimum": 0},
            },
        },
    },
}

MIN_K_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": {**_DEFS, "verdict": {k: v for k, v in VERDICT_SCHEMA.items() if k != "$schema"}},
    "type": "object",
    "required": ["verdict", "flow_bounds", "k_cap", "cap_source", "definitive", "attempts"],
    "properties": {
        "verdict": {"$ref": "#/$defs/verdict"},
        "flow_bounds": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["receive_bound", "send_bound"],
                "properties": {
                    "receive_bound": {"$ref": "#/$defs/bound"},
                    "send_bound": {"$ref": "#/$defs/bound"},
                },
            },
        },
        "k_cap": {"type": "integer", "minimum": 1},
        "cap_source": {"enum": ["auto", "user"]},
        "definitive": {"type": "boolean"},
        "attempts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "result"],
                "properties": {
                    "k": {"type": "integer"},
                    "result": {"enum": ["synchronizable", "violation", "inconclusive"]},
                },
            },
        },
    },
}

DEADLOCK_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": _DEFS,
    "type": "object",
    "required": ["k", "reports"],
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "synchronizable": {"type": ["boolean", "null"]},
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "witness", "detail"],
                "properties": {
                    "kind": {"enum": ["empty-buffer", "orphan", "unspecified-reception"]},
                    "witness": {"$ref": "#/$defs/execution"},
                    "detail": {"type": "object"},
                },
            },
        },
    },
}

REACH_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": _DEFS,
    "type": "object",
    "required": ["k", "process", "state", "reachable", "stats"],
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "process": {"type": "string"},
        "state": {"type": "string"},
        "reachable": {"type": "boolean"},
        "witness": {"$ref": "#/$defs/execution"},
        "stats": {"type": "object"},
    },
}

TRACE_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["k", "causal_delivery", "verdict", "scc_sizes"],
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "causal_delivery": {"type": "boolean"},
        "k_synchronous": {"type": ["boolean", "null"]},
        "verdict": {"enum": ["acyclic_or_good", "bad_cycle", "oversize_cycle"]},
        "cycle": {"type": "array", "items": {"type": "integer"}},
        "size": {"type": "integer"},
        "scc_sizes": {"type": "array", "items": {"type": "integer"}},
        "schedule": {"type": "array", "items": {"type": "array"}},
    },
}

REACHABILITY_GRAPH_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": _DEFS,
    "type": "object",
    "required": ["system", "k", "configs", "edges"],
    "properties": {
        "system": {"type": "string"},
        "k": {"type": "integer", "minimum": 1},
        "configs": {"type": "array", "items": {"type": "object", "required": ["id", "locals"]}},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source", "target", "label"],
                "properties": {
                    "label": {
                        "type": "object",
                        "properties": {
                            "sends": {"type": "array", "items": {"$ref": "#/$defs/step"}},
                            "receives": {"type": "array", "items": {"$ref": "#/$defs/step"}},
                        },
                    }
                },
            },
        },
    },
}

ORACLE_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": _DEFS,
    "type": "object",
    "required": ["k", "traces", "failing"],
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "traces": {"type": "integer", "minimum": 1},
        "failing": {"type": "integer", "minimum": 0},
        "first_failing": {
            "type": "object",
            "required": ["steps", "verdict", "k", "scc_sizes", "cycle", "size"],
            "properties": {
                "steps": {"type": "array", "items": {"$ref": "#/$defs/step"}},
                "verdict": {"enum": ["bad_cycle", "oversize_cycle"]},
                "cycle": {"type": "array", "items": {"type": "integer"}},
                "size": {"type": "integer", "minimum": 1},
            },
        },
    },
}

CORPUS_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["models"],
    "properties": {
        "models": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["model", "result", "k", "cap_source"],
                "properties": {
                    "model": {"type": "string"},
                    "result": {"enum": ["synchronizable", "violation", "inconclusive"]},
                    "k": {"type": "integer", "minimum": 1},
                    "cap_source": {"enum": ["auto", "user"]},
                },
            },
        },
    },
}


def validate_report(data: dict[str, Any], schema: dict[str, Any]) -> None:
    """
    Raises:
        jsonschema.ValidationError: when data does not follow schema
    """
    Draft202012Validator(schema).validate(data)
