"""Machine-readable reports with deterministic serialization.

Reports are plain dicts with a fixed key order, serialized by :func:`dumps`
which renders floats with 17 significant digits, so identical inputs and
seeds produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .bounds import BoundValue, Envelope
from .core import IndexSet

__all__ = [
    "SCHEMA_VERSION",
    "REPORT_SCHEMA",
    "dumps",
    "selection_entry",
    "envelope_fragment",
    "build_report",
    "file_digests",
]

SCHEMA_VERSION = "1"


def _render(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(format(x, ".17g") if np.isfinite(x) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _render(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        out.append("[")
        for i, value in enumerate(seq):
            if i:
                out.append(",")
            _render(value, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, floats at 17 significant digits."""
    out: list[str] = []
    _render(obj, out)
    return "".join(out)


def selection_entry(name: str, S: IndexSet, bv: BoundValue) -> dict:
    size = len(S)
    return {
        "name": name,
        "size": size,
        "V": int(bv.v),
        "tp_lower": size - int(bv.v),
        "fdp_upper": (bv.v / size) if size else 0.0,
        "indices": [int(i) for i in S.indices],
    }


def envelope_fragment(env: Envelope) -> dict:
    return {
        "k": [int(v) for v in env.k],
        "V": [int(v) for v in env.v],
        "tp_lower": [int(v) for v in env.tp_lower],
        "fdp_upper": [float(v) for v in env.fdp_upper],
    }


def file_digests(paths: dict[str, str | Path]) -> dict[str, str]:
    return {
        name: hashlib.sha256(Path(path).read_bytes()).hexdigest()
        for name, path in paths.items()
    }


def build_report(
    method: str,
    alpha: float,
    *,
    lam: float | None = None,
    selections: list[dict] | None = None,
    envelope: dict | None = None,
    spatial: dict | None = None,
    simulation: dict | None = None,
    seed: int | None = None,
    n_permutations: int | None = None,
    input_sha256: dict[str, str] | None = None,
) -> dict:
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "method": method,
        "alpha": float(alpha),
    }
    if lam is not None:
        report["lambda"] = float(lam)
    report["selections"] = selections if selections is not None else []
    if envelope is not None:
        report["envelope"] = envelope
    if spatial is not None:
        report["spatial"] = spatial
    if simulation is not None:
        report["simulation"] = simulation
    report["provenance"] = {
        "seed": seed,
        "B": n_permutations,
        "input_sha256": input_sha256 or {},
    }
    return report


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "method", "alpha", "selections", "provenance"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "method": {"type": "string"},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "lambda": {"type": "number", "minimum": 0, "maximum": 1},
        "selections": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "size", "V", "tp_lower", "fdp_upper"],
                "properties": {
                    "name": {"type": "string"},
                    "size": {"type": "integer", "minimum": 0},
                    "V": {"type": "integer", "minimum": 0},
                    "tp_lower": {"type": "integer", "minimum": 0},
                    "fdp_upper": {"type": "number", "minimum": 0, "maximum": 1},
                    "indices": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                },
            },
        },
        "envelope": {
            "type": "object",
            "required": ["k", "V", "tp_lower", "fdp_upper"],
            "properties": {
                "k": {"type": "array", "items": {"type": "integer"}},
                "V": {"type": "array", "items": {"type": "integer"}},
                "tp_lower": {"type": "array", "items": {"type": "integer"}},
                "fdp_upper": {"type": "array", "items": {"type": "number"}},
            },
        },
        "spatial": {"type": "object"},
        "simulation": {"type": "object"},
        "provenance": {
            "type": "object",
            "required": ["seed", "B", "input_sha256"],
            "properties": {
                "seed": {"type": ["integer", "null"]},
                "B": {"type": ["integer", "null"]},
                "input_sha256": {"type": "object", "additionalProperties": {"type": "string"}},
            },
        },
    },
}
