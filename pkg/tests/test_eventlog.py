from __future__ import annotations

import json

import pytest

from logictutor.errors import MalformedLog
from logictutor.eventlog import (
    IDENTITY_FIELD_NAMES,
    EventLogWriter,
    EventRecord,
    read_events,
)


def make_writer(tmp_path):
    return EventLogWriter(tmp_path / "events.log")


def fields(**overrides):
    base = dict(
        session="abc",
        group="EG1",
        exercise="faulty-software-system",
        task=1,
        statement=0,
        label="only-if",
        action="submit-formula",
        accepted=False,
        error="rule-diagnosed:implication-swap",
        text="(D & U) -> !B",
    )
    base.update(overrides)
    return base


def test_append_and_read_roundtrip(tmp_path):
    writer = make_writer(tmp_path)
    writer.append(**fields())
    writer.append(**fields(accepted=True, error="none", text="!B -> (D & U)"))
    writer.close()
    records = list(read_events(tmp_path / "events.log"))
    assert [r.seq for r in records] == [0, 1]
    assert records[0].error == "rule-diagnosed:implication-swap"
    assert records[1].accepted is True


def test_sequence_continues_across_writers(tmp_path):
    writer = make_writer(tmp_path)
    writer.append(**fields())
    writer.close()
    writer2 = make_writer(tmp_path)
    record = writer2.append(**fields())
    writer2.close()
    assert record.seq == 1


def test_torn_trailing_line_discarded_with_warning(tmp_path):
    writer = make_writer(tmp_path)
    writer.append(**fields())
    writer.append(**fields())
    writer.close()
    path = tmp_path / "events.log"
    data = path.read_text(encoding="utf-8")
    path.write_text(data + '{"seq": 2, "ts": "x", "ses', encoding="utf-8")
    with pytest.warns(RuntimeWarning, match="torn"):
        records = list(read_events(path))
    assert len(records) == 2  # prefix of the pre-crash log


def test_malformed_line_raises_with_line_number(tmp_path):
    writer = make_writer(tmp_path)
    writer.append(**fields())
    writer.close()
    path = tmp_path / "events.log"
    path.write_text(path.read_text(encoding="utf-8") + "not json at all\n", encoding="utf-8")
    with pytest.raises(MalformedLog) as err:
        list(read_events(path))
    assert err.value.line_number == 2


def test_sequence_gap_raises(tmp_path):
    writer = make_writer(tmp_path)
    r0 = writer.append(**fields())
    writer.close()
    path = tmp_path / "events.log"
    skipped = json.dumps({**json.loads(r0.to_json()), "seq": 5}, sort_keys=True)
    path.write_text(r0.to_json() + "\n" + skipped + "\n", encoding="utf-8")
    with pytest.raises(MalformedLog) as err:
        list(read_events(path))
    assert "gap" in str(err.value)


def test_no_identity_fields_in_records():
    record = EventRecord(
        seq=0, ts="2026-01-01T00:00:00+00:00", **fields()
    )
    serialized = json.loads(record.to_json())
    for banned in IDENTITY_FIELD_NAMES:
        assert banned not in serialized


def test_empty_log_reads_empty(tmp_path):
    path = tmp_path / "events.log"
    path.write_text("", encoding="utf-8")
    assert list(read_events(path)) == []
