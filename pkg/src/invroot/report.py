"""Machine-readable reports: JSON schemas and a serializer that writes every
float with 17 significant digits (lossless for IEEE doubles)."""

from __future__ import annotations

import json
import math

from .numeric import Interval
from .solver import ComparisonReport, RootResult

_NUMBER_OR_NULL = {"type": ["number", "null"]}
_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

SOLVE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "invroot solve result",
    "type": "object",
    "required": [
        "function", "domain", "bracket", "h_used", "root", "residual_at_root",
        "f_at_root", "iterations", "spurious_filtered", "method", "status",
    ],
    "properties": {
        "function": {"type": "string"},
        "domain": _PAIR,
        "bracket": _PAIR,
        "h_used": _NUMBER_OR_NULL,
        "root": {"type": "number"},
        "residual_at_root": {"type": "number"},
        "f_at_root": {"type": "number"},
        "iterations": {"type": "integer", "minimum": 0},
        "spurious_filtered": {"type": "boolean"},
        "method": {"enum": ["identity", "oracle"]},
        "status": {"enum": ["success", "spurious"]},
    },
}

ERROR_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "invroot error",
    "type": "object",
    "required": ["status", "error", "message", "exit_code"],
    "properties": {
        "status": {"const": "error"},
        "error": {"type": "string"},
        "message": {"type": "string"},
        "exit_code": {"enum": [2, 3, 4, 5]},
        "method": {"enum": ["identity", "oracle"]},
    },
}

VERIFY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "invroot verify report",
    "type": "object",
    "required": [
        "function", "domain", "samples", "max_rectangle_residual",
        "max_offset_spread", "tolerance", "status",
    ],
    "properties": {
        "function": {"type": "string"},
        "domain": _PAIR,
        "samples": {"type": "integer", "minimum": 1},
        "max_rectangle_residual": {"type": "number"},
        "max_offset_spread": {"type": "number"},
        "tolerance": {"type": "number"},
        "status": {"enum": ["success", "failed"]},
    },
}

_METHOD_ENTRY = {"oneOf": [SOLVE_SCHEMA, ERROR_SCHEMA]}

COMPARE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "invroot compare report",
    "type": "object",
    "required": ["function", "domain", "bracket", "identity", "oracle", "difference", "status"],
    "properties": {
        "function": {"type": "string"},
        "domain": _PAIR,
        "bracket": _PAIR,
        "identity": _METHOD_ENTRY,
        "oracle": _METHOD_ENTRY,
        "difference": _NUMBER_OR_NULL,
        "status": {"enum": ["success", "disagree", "error"]},
    },
}

BATCH_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "invroot batch report",
    "type": "object",
    "required": ["results", "total", "failed", "status"],
    "properties": {
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "line", "exit_code", "report"],
                "properties": {
                    "index": {"type": "integer"},
                    "line": {"type": "integer"},
                    "exit_code": {"enum": [0, 2, 3, 4, 5]},
                    "report": {"type": "object"},
                },
            },
        },
        "total": {"type": "integer"},
        "failed": {"type": "integer"},
        "status": {"enum": ["success", "failed"]},
    },
}


def _encode(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        text = format(value, ".17g")
        if not any(ch in text for ch in ".en"):
            text += ".0"
        return text
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(obj) -> str:
    return _encode(obj)


def interval_pair(iv: Interval) -> list[float]:
    return [iv.lo, iv.hi]


def result_record(result: RootResult, function: str, domain: Interval) -> dict:
    return {
        "function": function,
        "domain": interval_pair(domain),
        "bracket": interval_pair(result.bracket),
        "h_used": result.h_used,
        "root": result.root,
        "residual_at_root": result.residual_at_root,
        "f_at_root": result.f_at_root,
        "iterations": result.iterations,
        "spurious_filtered": result.spurious_filtered,
        "method": result.method,
        "status": result.status,
    }


def error_record(exc: Exception, exit_code: int, method: str | None = None) -> dict:
    rec = {"status": "error", "error": type(exc).__name__, "message": str(exc), "exit_code": exit_code}
    if method is not None:
        rec["method"] = method
    return rec


def comparison_record(report: ComparisonReport, function: str, domain: Interval) -> dict:
    return {
        "function": function,
        "domain": interval_pair(domain),
        "bracket": interval_pair(report.identity.bracket),
        "identity": result_record(report.identity, function, domain),
        "oracle": result_record(report.oracle, function, domain),
        "difference": report.difference,
        "status": "success" if report.agrees else "disagree",
    }
