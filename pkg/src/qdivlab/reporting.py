"""Serialization of reports to JSON, CSV and plain text."""

import csv
import io
import json
from typing import Any, Literal

from pydantic import BaseModel

from .errors import UnsupportedFormat
from .schemas import SuiteReport

ReportFormat = Literal["json", "csv", "text"]

CSV_COLUMNS = (
    "inequality",
    "dim",
    "profile",
    "checked",
    "violations",
    "saturated",
    "worst_margin",
    "worst_seed",
)


def to_json(report: BaseModel) -> str:
    """Sorted keys, two-space indent; identical reports give identical text."""
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def to_csv(report: SuiteReport) -> str:
    """One row per (inequality, dim, profile) cell."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for entry in report.entries:
        row = entry.model_dump()
        writer.writerow(["" if row[c] is None else row[c] for c in CSV_COLUMNS])
    return buffer.getvalue()


def _flatten(prefix: str, value: Any, lines: list[str]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], lines)
    elif isinstance(value, list):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, lines)
    else:
        lines.append(f"{prefix}: {value}")


def _suite_text(report: SuiteReport) -> str:
    lines = [
        f"seed={report.config.seed} trials/dim={report.config.trials_per_dim} "
        f"dims={report.config.dims} slack={report.config.slack:g}",
        "",
        f"{'inequality':<34} {'checked':>8} {'violations':>10} {'worst margin':>14}",
    ]
    for s in report.summary:
        margin = "-" if s.worst_margin is None else f"{s.worst_margin:.3e}"
        lines.append(f"{s.inequality:<34} {s.checked:>8} {s.violations:>10} {margin:>14}")
    if report.fixtures is not None:
        lines.append("")
        for fixture in report.fixtures.fixtures:
            lines.append(f"fixture {fixture.name}: {'pass' if fixture.passed else 'FAIL'}")
    if report.xor_td_witness is not None:
        w = report.xor_td_witness
        status = "exact" if w.exact else "INEXACT"
        lines.append(
            f"xor td witness (l={w.l}): max |td - td^l| = {w.max_deviation:.3e} ({status})"
        )
    lines.append("")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"


def to_text(report: BaseModel) -> str:
    if isinstance(report, SuiteReport):
        return _suite_text(report)
    lines: list[str] = []
    _flatten("", report.model_dump(mode="json"), lines)
    return "\n".join(lines) + "\n"


def emit_report(report: BaseModel, format: ReportFormat = "json") -> bytes:
    """
    Serialize a report.

    Raises:
        UnsupportedFormat: unknown format, or csv for anything but a SuiteReport.
    """
    if format == "json":
        return to_json(report).encode()
    if format == "text":
        return to_text(report).encode()
    if format == "csv":
        if not isinstance(report, SuiteReport):
            raise UnsupportedFormat(
                f"csv is only available for suite reports, not {type(report).__name__}"
            )
        return to_csv(report).encode()
    raise UnsupportedFormat(f"unknown report format {format!r}")
