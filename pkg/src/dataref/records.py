"""Dataset registry records and the line-oriented record store.

The store is UTF-8 text, one record per line, written as tab-separated
``key=value`` pairs in a fixed key order.  Optional fields are omitted when
absent, and values are backslash-escaped so titles may contain tabs or
newlines.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

log = logging.getLogger(__name__)

RESOURCE_TYPES = ("dataset", "text", "collection", "video", "interactive", "other")

# Fixed field order in the store format; optional fields are skipped when None.
_FIELD_ORDER = ("id", "title", "year", "language", "resource_type", "author")


@dataclass(frozen=True)
class DatasetRecord:
    """One registry entry; ``id`` is the registry's persistent identifier (a DOI)."""

    id: str
    title: str
    year: int | None = None
    language: str | None = None
    resource_type: str = "dataset"
    author: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if not self.title or not self.title.strip():
            raise ValueError(f"record {self.id!r}: title must be non-empty")
        if self.resource_type not in RESOURCE_TYPES:
            raise ValueError(
                f"record {self.id!r}: unknown resource_type {self.resource_type!r}"
            )


def _escape(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def _unescape(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        c = value[i]
        if c == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def format_record(record: DatasetRecord) -> str:
    """Render one record as a store line (no trailing newline)."""
    parts = []
    for key in _FIELD_ORDER:
        value = getattr(record, key)
        if value is None:
            continue
        parts.append(f"{key}={_escape(str(value))}")
    return "\t".join(parts)


def parse_record_line(line: str) -> DatasetRecord:
    """Parse one store line; raises ValueError on malformed input."""
    fields: dict[str, str] = {}
    for part in line.split("\t"):
        if "=" not in part:
            raise ValueError(f"field without '=': {part!r}")
        key, value = part.split("=", 1)
        fields[key] = _unescape(value)
    if "id" not in fields or "title" not in fields:
        raise ValueError("record line missing id or title")
    year = None
    if "year" in fields:
        year = int(fields["year"])
    return DatasetRecord(
        id=fields["id"],
        title=fields["title"],
        year=year,
        language=fields.get("language"),
        resource_type=fields.get("resource_type", "other"),
        author=fields.get("author"),
    )


def write_records(records: Iterable[DatasetRecord], path: str | Path) -> int:
    """Write records to ``path`` in store format; returns the record count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(format_record(record))
            fh.write("\n")
            n += 1
    return n


def load_records(path: str | Path) -> list[DatasetRecord]:
    """Load a record store.

    Invalid lines are skipped with a warning naming the line number.  When two
    lines share an id the later one wins (also warned).  An unreadable file is
    a fatal error for the caller (OSError propagates).
    """
    by_id: dict[str, DatasetRecord] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            try:
                record = parse_record_line(line)
            except (ValueError, TypeError) as exc:
                log.warning("%s:%d: skipping invalid record line (%s)", path, lineno, exc)
                continue
            if record.id in by_id:
                log.warning(
                    "%s:%d: duplicate record id %r, keeping the later record",
                    path, lineno, record.id,
                )
            by_id[record.id] = record
    return list(by_id.values())
