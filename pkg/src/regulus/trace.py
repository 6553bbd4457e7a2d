"""Structured, replayable run traces.

A trace is an ordered list of stage records plus the manifest that started
the run. Serialization is canonical (sorted keys, exact rationals as
strings, no wall-clock fields), so identical (input, config, seed) runs
produce byte-identical trace files.
"""

from __future__ import annotations

import json
from fractions import Fraction

SCHEMA = "regulus-trace/1"


def jsonable(value):
    """Normalize values for canonical JSON: exact, ordered, stringly rationals."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (frozenset, set)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        return value
    return str(value)


class PipelineTrace:
    """Ordered stage records for one run."""

    def __init__(self, manifest: dict | None = None):
        self.manifest = jsonable(manifest or {})
        self.records: list[dict] = []

    def add(self, stage: str, **fields) -> None:
        record = {"stage": stage}
        record.update({k: jsonable(v) for k, v in sorted(fields.items())})
        self.records.append(record)

    def stages(self, name: str | None = None) -> list[dict]:
        if name is None:
            return list(self.records)
        return [r for r in self.records if r["stage"] == name]

    def to_json(self) -> str:
        payload = {
            "schema": SCHEMA,
            "manifest": self.manifest,
            "stages": self.records,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PipelineTrace":
        payload = json.loads(text)
        trace = cls(payload.get("manifest") or {})
        trace.records = list(payload.get("stages") or [])
        return trace
