"""Error statistics over event logs.

For every (group, exercise, statement) that was attempted at least once:

  * error rate: fraction of attempting sessions that had at least one
    rejected submission for the statement;
  * most-frequent-error rate: fraction of attempting sessions exhibiting
    the modal error classification (ties broken by classification name).

A session "attempts" a statement by submitting anything for it, accepted
or not. Statements are keyed by their log label (the statement's type
attribute when the exercise declares one, a task/statement fallback
otherwise).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .eventlog import EventRecord

# Action kinds that count as attempts at a gradeable answer.
SUBMISSION_ACTIONS = frozenset(
    {"submit-formula", "submit-step", "apply-rule", "resolve-step", "pick-variables"}
)


@dataclass(frozen=True)
class StatRow:
    group: str
    exercise: str
    statement: str
    attempts: int  # sessions that attempted
    error_rate: float
    most_frequent_error: str | None
    most_frequent_rate: float

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "exercise": self.exercise,
            "statement": self.statement,
            "attempts": self.attempts,
            "error_rate": self.error_rate,
            "most_frequent_error": self.most_frequent_error,
            "most_frequent_rate": self.most_frequent_rate,
        }


def compute_stats(
    events: Iterable[EventRecord],
    exercise: str | None = None,
    group: str | None = None,
) -> list[StatRow]:
    attempted: dict[tuple, set] = defaultdict(set)
    errors: dict[tuple, dict[str, set]] = defaultdict(lambda: defaultdict(set))
    for record in events:
        if record.action not in SUBMISSION_ACTIONS:
            continue
        if exercise is not None and record.exercise != exercise:
            continue
        if group is not None and record.group != group:
            continue
        key = (record.group, record.exercise, record.label)
        attempted[key].add(record.session)
        if not record.accepted:
            errors[key][record.error].add(record.session)

    rows = []
    for key in sorted(attempted):
        sessions = attempted[key]
        n = len(sessions)
        erring = set().union(*errors[key].values()) if errors.get(key) else set()
        error_rate = len(erring) / n
        mode = None
        mode_count = 0
        for classification in sorted(errors.get(key, {})):
            count = len(errors[key][classification])
            if count > mode_count:
                mode, mode_count = classification, count
        rows.append(
            StatRow(
                group=key[0],
                exercise=key[1],
                statement=key[2],
                attempts=n,
                error_rate=error_rate,
                most_frequent_error=mode,
                most_frequent_rate=mode_count / n if n else 0.0,
            )
        )
    return rows
