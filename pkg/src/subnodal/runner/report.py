"""Machine-readable scenario reports: CSV record tables plus a JSON summary."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = 1


@dataclass
class Verdict:
    criterion: str
    passed: bool
    detail: str


@dataclass
class Report:
    scenario: str
    config_echo: str
    tables: dict[str, list[dict]] = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def add_verdict(self, criterion: str, passed: bool, detail: str = "") -> None:
        self.verdicts.append(Verdict(criterion, bool(passed), detail))

    def time_block(self, name: str):
        report = self

        class _Timer:
            def __enter__(self):
                self.t0 = time.perf_counter()
                return self

            def __exit__(self, *exc):
                report.timings[name] = report.timings.get(name, 0.0) + (
                    time.perf_counter() - self.t0
                )
                return False

        return _Timer()

    def summary_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "config": self.config_echo,
            "verdicts": [
                {"criterion": v.criterion, "pass": v.passed, "detail": v.detail}
                for v in self.verdicts
            ],
            "timings_seconds": {k: round(v, 3) for k, v in sorted(self.timings.items())},
            "tables": sorted(self.tables),
        }

    def summary_text(self) -> str:
        lines = [f"scenario {self.scenario}: " + ("PASS" if self.all_pass else "FAIL")]
        for v in self.verdicts:
            lines.append(f"  [{'pass' if v.passed else 'FAIL'}] {v.criterion}: {v.detail}")
        return "\n".join(lines)


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def table_to_csv(rows: list[dict]) -> str:
    if not rows:
        return "\n"
    cols = list(rows[0].keys())
    lines = [",".join(cols)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def emit_report(report: Report, out_dir) -> list[Path]:
    """Write one CSV per table and a JSON summary; returns the file list."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, rows in sorted(report.tables.items()):
        p = out / f"{report.scenario}_{name}.csv"
        p.write_text(table_to_csv(rows))
        written.append(p)
    summary = out / f"{report.scenario}_summary.json"
    summary.write_text(json.dumps(report.summary_dict(), indent=2, sort_keys=True) + "\n")
    written.append(summary)
    return written


# -- summary schema (shipped, hand-validated: no external dependency) ---------

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "scenario", "config", "verdicts", "timings_seconds", "tables"],
    "properties": {
        "schema_version": {"type": "integer"},
        "scenario": {"type": "string"},
        "config": {"type": "string"},
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["criterion", "pass", "detail"],
                "properties": {
                    "criterion": {"type": "string"},
                    "pass": {"type": "boolean"},
                    "detail": {"type": "string"},
                },
            },
        },
        "timings_seconds": {"type": "object"},
        "tables": {"type": "array", "items": {"type": "string"}},
    },
}

_TYPES = {
    "object": dict,
    "array": list,
    "string": str,
    "integer": int,
    "boolean": bool,
    "number": (int, float),
}


def validate_summary(doc: dict, schema: dict = SUMMARY_SCHEMA, path: str = "$") -> None:
    """Minimal JSON-schema check (type / required / properties / items)."""
    expected = _TYPES[schema["type"]]
    if not isinstance(doc, expected) or (schema["type"] == "integer" and isinstance(doc, bool)):
        raise ValueError(f"{path}: expected {schema['type']}, got {type(doc).__name__}")
    if schema["type"] == "object":
        for key in schema.get("required", []):
            if key not in doc:
                raise ValueError(f"{path}: missing required key {key!r}")
        for key, sub in schema.get("properties", {}).items():
            if key in doc:
                validate_summary(doc[key], sub, f"{path}.{key}")
    elif schema["type"] == "array" and "items" in schema:
        for i, item in enumerate(doc):
            validate_summary(item, schema["items"], f"{path}[{i}]")
