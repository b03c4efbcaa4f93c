"""Check records, suite reports, and deterministic JSON/CSV artifact writers.

Every verification run produces one SuiteReport: a list of CheckRecords (each
naming the claim it certifies, the computed number, the target, and the
tolerance) plus the configuration that produced it.  Serialization is strict
JSON (schema versioned, complex numbers as {"re", "im"}, non-finite floats as
strings) with sorted keys, so two runs with the same config differ only in the
runtime field.  All file writes go through a temp-file + rename so a crashed
run never leaves a truncated report behind.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


def jsonable(value: Any) -> Any:
    """Strict-JSON image of a value: complex -> {re, im}, nan/inf -> strings."""
    if isinstance(value, complex):
        return {"re": jsonable(value.real), "im": jsonable(value.imag)}
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, str)) or value is None:
        return value
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "tolist"):  # numpy array or scalar
        return jsonable(value.tolist())
    if hasattr(value, "item"):
        return jsonable(value.item())
    raise TypeError(f"cannot serialize {type(value).__name__} to report JSON")


@dataclass(frozen=True)
class CheckRecord:
    """One certified claim: computed vs target at a stated tolerance."""

    id: str
    anchor: str
    computed: Any
    target: Any
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "anchor": self.anchor,
            "computed": jsonable(self.computed),
            "target": jsonable(self.target),
            "tolerance": jsonable(float(self.tolerance)),
            "pass": bool(self.passed),
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def check(id: str, anchor: str, computed: Any, target: Any, tolerance: float,
          *, detail: str = "") -> CheckRecord:
    """Build a record whose pass flag is |computed - target| <= tolerance."""
    try:
        gap = abs(complex(computed) - complex(target))
        ok = bool(gap <= tolerance) and math.isfinite(gap)
    except (TypeError, ValueError):
        ok = False
    return CheckRecord(id, anchor, computed, target, float(tolerance), ok, detail)


def check_bound(id: str, anchor: str, computed: float, bound: float,
                *, detail: str = "") -> CheckRecord:
    """Record for a one-sided claim: computed <= bound."""
    ok = bool(math.isfinite(float(computed)) and float(computed) <= float(bound))
    return CheckRecord(id, anchor, float(computed), 0.0, float(bound), ok, detail)


@dataclass
class SuiteReport:
    suite: str
    records: list[CheckRecord] = field(default_factory=list)
    runtime: float = 0.0
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "pass": self.passed,
            "checks": len(self.records),
            "failures": sum(not r.passed for r in self.records),
            "config": jsonable(self.config),
            "records": [r.to_dict() for r in self.records],
            "runtime": jsonable(float(self.runtime)),
        }

    def summary_line(self) -> str:
        n = len(self.records)
        good = sum(r.passed for r in self.records)
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.suite}: {verdict} ({good}/{n} checks, {self.runtime:.1f}s)"


def merge_reports(suite: str, parts: list[SuiteReport], config: dict | None = None) -> SuiteReport:
    records = [r for part in parts for r in part.records]
    runtime = sum(p.runtime for p in parts)
    return SuiteReport(suite=suite, records=records, runtime=runtime,
                       config=dict(config or {}))


# ---------------------------------------------------------------------------
# writers


def _atomic_write(path: str, payload: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nhlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def dumps_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(report: SuiteReport | dict, path: str) -> None:
    obj = report.to_dict() if isinstance(report, SuiteReport) else report
    _atomic_write(path, dumps_json(obj))


def _csv_cell(value: Any) -> str:
    if isinstance(value, complex):
        if value.imag == 0.0:
            return repr(value.real)
        sign = "+" if value.imag >= 0 else "-"
        return f"{value.real!r}{sign}{abs(value.imag)!r}j"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):
        return _csv_cell(value.item())
    return str(value)


def dumps_csv(rows: list[dict], fieldnames: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k, "")) for k in fieldnames})
    return buf.getvalue()


def write_csv(rows: list[dict], fieldnames: list[str], path: str) -> None:
    _atomic_write(path, dumps_csv(rows, fieldnames))


REPORT_CSV_FIELDS = ["id", "anchor", "computed", "target", "tolerance", "pass", "detail"]


def report_rows(report: SuiteReport) -> list[dict]:
    """Flatten a report for CSV output (complex cells as re+imj strings)."""
    return [
        {
            "id": r.id,
            "anchor": r.anchor,
            "computed": r.computed,
            "target": r.target,
            "tolerance": r.tolerance,
            "pass": r.passed,
            "detail": r.detail,
        }
        for r in report.records
    ]


def write_report(report: SuiteReport, path: str, fmt: str = "json") -> None:
    if fmt == "json":
        write_json(report, path)
    elif fmt == "csv":
        write_csv(report_rows(report), REPORT_CSV_FIELDS, path)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
