"""Versioned output records and their JSON / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = 1

__all__ = ["OutputRecord", "SCHEMA_VERSION", "emit_csv", "emit_json", "parse_csv", "parse_json"]


@dataclass
class OutputRecord:
    command: str
    parameters: dict
    rows: list
    summary: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION


def emit_json(record: OutputRecord) -> str:
    return json.dumps(asdict(record), indent=2, sort_keys=False) + "\n"


def parse_json(text: str) -> OutputRecord:
    data = json.loads(text)
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    return OutputRecord(command=data["command"], parameters=data["parameters"],
                        rows=data["rows"], summary=data.get("summary", {}),
                        schema_version=version)


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _uncell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def emit_csv(rows: list) -> str:
    """Rows as CSV with a header row; floats use their shortest round-trip repr."""
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[k]) for k in header])
    return buf.getvalue()


def parse_csv(text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return []
    return [{k: _uncell(v) for k, v in zip(header, line)} for line in reader]
