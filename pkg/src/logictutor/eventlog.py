"""Append-only anonymous event log.

One UTF-8 JSON object per line. Appends are durable (flush + fsync)
before the caller proceeds, sequence numbers are gap-free within a file,
and a reader tolerates exactly one torn trailing line (discarded with a
warning) so a crash mid-write never poisons the log.

The record shape is anonymous by construction: it names a random session
id and an opaque experiment group, never a person.
"""

from __future__ import annotations

import json
import os
import threading
import warnings
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator

from .errors import MalformedLog

# Field names that must never appear in a record; a test greps for them.
IDENTITY_FIELD_NAMES = ("name", "user", "username", "email", "ip", "student", "matriculation")

_FIELDS = (
    "seq",
    "ts",
    "session",
    "group",
    "exercise",
    "task",
    "statement",
    "label",
    "action",
    "accepted",
    "error",
    "text",
)


@dataclass(frozen=True)
class EventRecord:
    seq: int
    ts: str  # UTC timestamp, ISO 8601
    session: str
    group: str
    exercise: str
    task: int
    statement: int | None  # statement index within the task, if applicable
    label: str  # statistics label, e.g. the statement type "only-if"
    action: str
    accepted: bool
    error: str  # syntax | inequivalent | rule-diagnosed:<id> | not-resolvable | not-applicable | none
    text: str  # raw submitted payload

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "EventRecord":
        return cls(**{name: data[name] for name in _FIELDS})


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class EventLogWriter:
    """Single-writer append sink; appends are serialized and fsynced."""

    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seq = self._last_seq() + 1
        self._file = open(self.path, "a", encoding="utf-8")

    def _last_seq(self) -> int:
        if not self.path.exists():
            return -1
        last = -1
        for record in read_events(self.path):
            last = record.seq
        return last

    def append(self, **fields) -> EventRecord:
        """Assign the next sequence number and durably append one record."""
        with self._lock:
            record = EventRecord(seq=self._seq, ts=utc_now(), **fields)
            self._file.write(record.to_json() + "\n")
            self._file.flush()
            os.fsync(self._file.fileno())
            self._seq += 1
            return record

    def close(self) -> None:
        with self._lock:
            self._file.close()


def read_events(path) -> Iterator[EventRecord]:
    """Yield records from a log file.

    A final line without a newline is treated as a torn write and skipped
    with a warning; anything else malformed raises MalformedLog with its
    line number, as does a gap in the sequence numbers.
    """
    data = Path(path).read_text(encoding="utf-8")
    if not data:
        return
    complete = data.endswith("\n")
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    expected_seq = None
    for line_number, line in enumerate(lines, start=1):
        is_last = line_number == len(lines)
        if is_last and not complete:
            warnings.warn(
                f"{path}: discarding torn trailing line {line_number}", RuntimeWarning, stacklevel=2
            )
            return
        try:
            payload = json.loads(line)
            record = EventRecord.from_dict(payload)
        except (ValueError, KeyError, TypeError) as err:
            raise MalformedLog(line_number, f"unreadable record: {err}") from None
        if expected_seq is not None and record.seq != expected_seq:
            raise MalformedLog(line_number, f"sequence gap: expected {expected_seq}, got {record.seq}")
        expected_seq = record.seq + 1
        yield record
