"""Session state machine: routes student actions to task handlers.

A session walks an exercise's task pipeline linearly. Completing a task
binds its declared output into the session environment and advances to
the next task (whose inputs are then guaranteed bound, by load-time
validation). Actions on earlier, completed tasks are answered read-only:
the same feedback is computed but nothing mutates, so completed tasks
never revert. Dispatch is deterministic, which makes recorded action
sequences replayable bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    AmbiguousPivot,
    MalformedAction,
    NotResolvable,
    RuleNotApplicable,
    TaskNotActive,
    UnknownOption,
)
from .exercises import Exercise, TaskSpec
from .feedback import (
    DEFAULT_MAX_SEQUENCE,
    DEFAULT_SEARCH_CAP,
    LEVEL_DETAIL,
    LEVEL_VERDICT,
    FeedbackConfig,
    FeedbackItem,
    FeedbackReport,
    _verdict_item,
    format_assignment,
    generate_feedback,
)
from .formulas import Formula, Not, conjoin
from .parser import parse
from .render import render
from .resolution import (
    DerivationRecord,
    ResolutionState,
    clause_literals,
    init_resolution,
    replay_derivation,
)
from .semantics import distinguishing_assignment, equivalent
from .transform import TransformationState, apply_named_rule, submit_step, undo


@dataclass(frozen=True)
class Action:
    task_index: int
    kind: str
    payload: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"task": self.task_index, "kind": self.kind, "payload": dict(self.payload)}

    @classmethod
    def from_dict(cls, data: dict) -> "Action":
        return cls(int(data["task"]), data["kind"], dict(data.get("payload", {})))


@dataclass
class ActionResult:
    accepted: bool
    report: FeedbackReport | None = None
    task_completed: bool = False
    session_completed: bool = False
    error_class: str = "none"
    statement_index: int | None = None
    extra: dict = field(default_factory=dict)


class Session:
    def __init__(
        self,
        session_id: str,
        exercise: Exercise,
        group: str = "",
        search_cap: int = DEFAULT_SEARCH_CAP,
        max_sequence_len: int = DEFAULT_MAX_SEQUENCE,
    ):
        self.id = session_id
        self.exercise = exercise
        self.group = group
        self.search_cap = search_cap
        self.max_sequence_len = max_sequence_len
        self.env: dict[str, object] = {}
        self.current = 0
        self.history: list[Action] = []
        self._runtimes: dict[int, object] = {}
        self._task_data: list[dict] = [self._fresh_data(t) for t in exercise.tasks]

    @staticmethod
    def _fresh_data(task: TaskSpec) -> dict:
        if task.type == "CreateFormulas":
            return {"accepted": [None] * len(task.statements)}
        return {}

    @property
    def completed(self) -> bool:
        return self.current >= len(self.exercise.tasks)

    def status(self, index: int) -> str:
        if index < self.current:
            return "completed"
        if index == self.current:
            return "in-progress"
        return "not-started"

    # -- environment -----------------------------------------------------

    def _input_value(self, name: str):
        return self.env[name]

    def _single_formula(self, name: str) -> Formula:
        value = self.env[name]
        if isinstance(value, Formula):
            return value
        if isinstance(value, tuple) and len(value) == 1 and isinstance(value[0], Formula):
            return value[0]
        raise MalformedAction(f"input {name!r} does not hold a single formula")

    def _formula_list(self, name: str) -> list[Formula]:
        value = self.env[name]
        if isinstance(value, Formula):
            return [value]
        if isinstance(value, tuple):
            return [v for v in value if isinstance(v, Formula)]
        raise MalformedAction(f"input {name!r} does not hold formulas")

    # -- runtimes --------------------------------------------------------

    def _runtime(self, index: int):
        """Task-type model object for an entered task, built on demand."""
        if index in self._runtimes:
            return self._runtimes[index]
        task = self.exercise.tasks[index]
        if task.type in ("ManualTransformation", "GuiTransformation"):
            original = self._single_formula(task.inputs[0])
            runtime = TransformationState(original, task.target())
        elif task.type == "Resolution":
            runtime = init_resolution(self._single_formula(task.inputs[0]))
        else:
            runtime = None
        self._runtimes[index] = runtime
        return runtime

    # -- dispatch --------------------------------------------------------

    def dispatch(self, action: Action) -> ActionResult:
        index = action.task_index
        if not 0 <= index < len(self.exercise.tasks):
            raise MalformedAction(f"no task with index {index}")
        if index > self.current:
            raise TaskNotActive(f"task {index} is not reachable yet")
        readonly = index < self.current
        task = self.exercise.tasks[index]
        handler = _HANDLERS.get((task.type, action.kind))
        if handler is None:
            raise MalformedAction(
                f"action kind {action.kind!r} does not apply to a {task.type} task"
            )
        result = handler(self, index, task, action.payload, readonly)
        if not readonly:
            self.history.append(action)
            if result.task_completed:
                self.current = index + 1
        result.session_completed = self.completed
        return result

    def _complete(self, index: int, output_value=None) -> None:
        task = self.exercise.tasks[index]
        if task.output is not None:
            self.env[task.output] = output_value

    # -- snapshots -------------------------------------------------------

    def snapshot(self) -> dict:
        env = {}
        for name, value in sorted(self.env.items()):
            if isinstance(value, Formula):
                env[name] = {"kind": "formula", "text": render(value)}
            elif value and all(isinstance(v, Formula) for v in value):
                env[name] = {"kind": "formulas", "texts": [render(v) for v in value]}
            else:
                env[name] = {"kind": "variables", "names": list(value)}
        tasks = []
        for i, task in enumerate(self.exercise.tasks):
            entry: dict = {"status": self.status(i)}
            entry.update(self._task_data[i])
            runtime = self._runtimes.get(i)
            if isinstance(runtime, TransformationState):
                entry["steps"] = [render(step) for step in runtime.steps]
            elif isinstance(runtime, ResolutionState):
                entry["derived"] = [r.to_dict() for r in runtime.derivation()]
            tasks.append(entry)
        return {
            "session": self.id,
            "group": self.group,
            "exercise": self.exercise.name,
            "current": self.current,
            "completed": self.completed,
            "env": env,
            "tasks": tasks,
            "history": [a.to_dict() for a in self.history],
        }

    @classmethod
    def restore(cls, exercise: Exercise, snap: dict, **kwargs) -> "Session":
        session = cls(snap["session"], exercise, group=snap.get("group", ""), **kwargs)
        session.current = int(snap["current"])
        for name, value in snap.get("env", {}).items():
            if value["kind"] == "formula":
                session.env[name] = parse(value["text"])
            elif value["kind"] == "formulas":
                session.env[name] = tuple(parse(t) for t in value["texts"])
            else:
                session.env[name] = tuple(value["names"])
        for i, entry in enumerate(snap.get("tasks", [])):
            data = session._task_data[i]
            if "accepted" in entry:
                data["accepted"] = list(entry["accepted"])
            for key in ("chosen", "choices", "score", "text", "done"):
                if key in entry:
                    data[key] = entry[key]
            if "steps" in entry and entry["steps"]:
                runtime = session._runtime(i)
                runtime.steps = [parse(t) for t in entry["steps"]]
            if "derived" in entry and entry["derived"]:
                runtime = session._runtime(i)
                replay_derivation(runtime, [DerivationRecord.from_dict(d) for d in entry["derived"]])
        session.history = [Action.from_dict(a) for a in snap.get("history", [])]
        return session


def start_session(
    exercise: Exercise, session_id: str = "local", group: str = "", **kwargs
) -> Session:
    """Fresh session at the first task; an exercise without tasks is
    complete immediately."""
    return Session(session_id, exercise, group=group, **kwargs)


def replay(exercise: Exercise, actions, session_id: str = "local", group: str = "", **kwargs):
    """Re-run a recorded action sequence on a fresh session.

    Returns the session and the per-action outcomes; engine errors are
    captured as outcomes so erratic recordings replay deterministically.
    """
    session = start_session(exercise, session_id, group, **kwargs)
    outcomes = []
    for action in actions:
        try:
            outcomes.append(session.dispatch(action))
        except Exception as err:  # noqa: BLE001 - replay mirrors live behaviour
            outcomes.append(err)
    return session, outcomes


# -- handlers ------------------------------------------------------------


def _require(payload: dict, key: str, types) -> object:
    if key not in payload:
        raise MalformedAction(f"payload field {key!r} is missing")
    value = payload[key]
    if not isinstance(value, types):
        raise MalformedAction(f"payload field {key!r} has the wrong type")
    return value


def _capped_items(items, max_level):
    return tuple(i for i in items if i.level <= max_level)


def _handle_pick_variables(session: Session, index, task: TaskSpec, payload, readonly):
    names = _require(payload, "names", list)
    if not all(isinstance(n, str) for n in names):
        raise MalformedAction("payload field 'names' must hold strings")
    offered = {v.name for v in task.offered}
    for name in names:
        if name not in offered:
            raise UnknownOption(name)
    chosen = set(names)
    solution = set(task.solution_variables())
    meanings = {v.name: v.meaning for v in task.offered}
    if chosen == solution:
        ordered = tuple(v.name for v in task.offered if v.name in chosen)
        if not readonly:
            session._task_data[index]["chosen"] = list(ordered)
            session._complete(index, ordered)
        report = FeedbackReport("correct", _capped_items([_verdict_item(True)], task.max_level))
        return ActionResult(True, report, task_completed=True)
    items = [_verdict_item(False)]
    if len(chosen) != len(solution):
        items.append(
            FeedbackItem(
                LEVEL_VERDICT,
                "task-feedback",
                "pickvars.count-mismatch",
                {"chosen": len(chosen), "expected": len(solution)},
            )
        )
    for name in task.solution_variables():
        if name not in chosen:
            items.append(
                FeedbackItem(
                    LEVEL_DETAIL,
                    "task-feedback",
                    "pickvars.missing",
                    {"name": name, "meaning": f" ({meanings[name]})" if meanings.get(name) else ""},
                )
            )
    for v in task.offered:
        if v.name in chosen and not v.in_solution:
            items.append(
                FeedbackItem(
                    LEVEL_DETAIL,
                    "task-feedback",
                    "pickvars.superfluous",
                    {"name": v.name, "meaning": f" ({v.meaning})" if v.meaning else ""},
                )
            )
    report = FeedbackReport("semantically-wrong", _capped_items(items, task.max_level))
    return ActionResult(False, report, error_class="inequivalent")


def _handle_submit_formula(session: Session, index, task: TaskSpec, payload, readonly):
    statement_index = _require(payload, "statement", int) if task.statements else 0
    text = _require(payload, "text", str)
    if task.statements and not 0 <= statement_index < len(task.statements):
        raise MalformedAction(f"no statement with index {statement_index}")
    statement = task.statements[statement_index]
    allowed = None
    if task.inputs:
        allowed = tuple(session._input_value(task.inputs[0]))
    config = FeedbackConfig(
        max_level=task.max_level,
        allowed=allowed,
        meanings=task.meaning_map(),
        max_sequence_len=session.max_sequence_len,
        search_cap=session.search_cap,
    )
    report = generate_feedback(text, statement.solution, config)
    accepted = report.verdict == "correct"
    task_completed = False
    if accepted and not readonly:
        data = session._task_data[index]
        if data["accepted"][statement_index] is None:
            data["accepted"][statement_index] = text
        if all(t is not None for t in data["accepted"]):
            task_completed = True
            session._complete(index, tuple(parse(t) for t in data["accepted"]))
    return ActionResult(
        accepted,
        report,
        task_completed=task_completed,
        error_class=report.error_class,
        statement_index=statement_index,
    )


def _handle_inference_formula(session: Session, index, task: TaskSpec, payload, readonly):
    text = _require(payload, "text", str)
    premises: list[Formula] = []
    for name in task.inputs[:-1]:
        premises.extend(session._formula_list(name))
    conclusion = session._single_formula(task.inputs[-1])
    canonical = conjoin(premises + [Not(conclusion)])

    from .errors import FormulaSyntaxError
    from .feedback import LEVEL_CHECKS

    try:
        candidate = parse(text)
    except FormulaSyntaxError as err:
        items = [
            _verdict_item(False),
            FeedbackItem(
                LEVEL_CHECKS,
                "syntax-message",
                "syntax.invalid",
                {"offset": err.offset, "detail": err.expectation},
            ),
        ]
        report = FeedbackReport("syntactically-wrong", _capped_items(items, task.max_level))
        return ActionResult(False, report, error_class="syntax")
    if equivalent(candidate, canonical):
        if not readonly:
            session._task_data[index]["text"] = text
            session._complete(index, candidate)
        report = FeedbackReport("correct", _capped_items([_verdict_item(True)], task.max_level))
        return ActionResult(True, report, task_completed=True)
    witness = distinguishing_assignment(candidate, canonical)
    items = [
        _verdict_item(False),
        FeedbackItem(
            LEVEL_DETAIL,
            "counterexample",
            "counterexample",
            {"assignment": format_assignment(witness)},
            assignment=witness,
        ),
    ]
    report = FeedbackReport("semantically-wrong", _capped_items(items, task.max_level))
    return ActionResult(False, report, error_class="inequivalent")


def _transformation_result(session, index, task, state, report, readonly):
    accepted = report.verdict == "correct"
    task_completed = False
    if accepted and state.complete and not readonly:
        task_completed = True
        session._complete(index, state.latest)
    error_class = report.error_class if not accepted else "none"
    return ActionResult(accepted, report, task_completed=task_completed, error_class=error_class)


def _handle_submit_step(session: Session, index, task: TaskSpec, payload, readonly):
    text = _require(payload, "text", str)
    state = session._runtime(index)
    if readonly:
        state = TransformationState(state.original, state.target, list(state.steps))
    report = submit_step(state, text)
    report = FeedbackReport(report.verdict, _capped_items(report.items, task.max_level), report.diagnosis)
    return _transformation_result(session, index, task, state, report, readonly)


def _handle_apply_rule(session: Session, index, task: TaskSpec, payload, readonly):
    rule_id = _require(payload, "rule", str)
    position = _require(payload, "position", list)
    if not all(isinstance(p, int) for p in position):
        raise MalformedAction("payload field 'position' must hold child indices")
    state = session._runtime(index)
    if readonly:
        state = TransformationState(state.original, state.target, list(state.steps))
    try:
        apply_named_rule(state, rule_id, tuple(position))
    except RuleNotApplicable:
        items = [
            FeedbackItem(
                LEVEL_VERDICT,
                "task-feedback",
                "rule.not-applicable",
                {"rule": rule_id},
            )
        ]
        report = FeedbackReport("semantically-wrong", _capped_items(items, task.max_level))
        return ActionResult(False, report, error_class="not-applicable")
    done = state.complete
    key = "transformation.complete" if done else "transformation.accepted"
    report = FeedbackReport(
        "correct",
        _capped_items([_verdict_item(True), FeedbackItem(LEVEL_VERDICT, "verdict-message", key)], task.max_level),
    )
    return _transformation_result(session, index, task, state, report, readonly)


def _handle_undo(session: Session, index, task: TaskSpec, payload, readonly):
    state = session._runtime(index)
    if not readonly:
        undo(state)
    report = FeedbackReport("correct", (_verdict_item(True),))
    return ActionResult(True, report)


def _handle_resolve_step(session: Session, index, task: TaskSpec, payload, readonly):
    c1 = _require(payload, "c1", int)
    c2 = _require(payload, "c2", int)
    pivot = payload.get("pivot")
    if pivot is not None and not isinstance(pivot, str):
        raise MalformedAction("payload field 'pivot' must be a variable name")
    state: ResolutionState = session._runtime(index)
    if readonly:
        restored = ResolutionState(state.initial_clauses())
        replay_derivation(restored, state.derivation())
        state = restored
    try:
        node, created, tautology = state.resolve_step(c1, c2, pivot)
    except NotResolvable:
        items = [
            FeedbackItem(
                LEVEL_VERDICT,
                "task-feedback",
                "resolution.not-resolvable",
                {"pivot": f" on {pivot}" if pivot else ""},
            )
        ]
        report = FeedbackReport("semantically-wrong", _capped_items(items, task.max_level))
        return ActionResult(False, report, error_class="not-resolvable")
    except AmbiguousPivot as err:
        items = [
            FeedbackItem(
                LEVEL_VERDICT,
                "task-feedback",
                "resolution.ambiguous-pivot",
                {"candidates": ", ".join(err.candidates)},
            )
        ]
        report = FeedbackReport("semantically-wrong", _capped_items(items, task.max_level))
        return ActionResult(False, report, error_class="not-resolvable")
    items = [_verdict_item(True)]
    if not created:
        items.append(FeedbackItem(LEVEL_VERDICT, "task-feedback", "resolution.duplicate", {}))
    if tautology:
        items.append(FeedbackItem(LEVEL_VERDICT, "task-feedback", "resolution.tautology", {}))
    task_completed = False
    if state.goal_reached:
        items.append(FeedbackItem(LEVEL_VERDICT, "task-feedback", "resolution.goal", {}))
        if not readonly:
            task_completed = True
            session._complete(index)
    report = FeedbackReport("correct", _capped_items(items, task.max_level))
    return ActionResult(
        True,
        report,
        task_completed=task_completed,
        extra={"clause": {"id": node.id, "literals": clause_literals(node.clause)}},
    )


def _handle_acknowledge(session: Session, index, task: TaskSpec, payload, readonly):
    if not readonly:
        session._task_data[index]["done"] = True
        session._complete(index)
    report = FeedbackReport("correct", (FeedbackItem(LEVEL_VERDICT, "verdict-message", "task.completed"),))
    return ActionResult(True, report, task_completed=True)


def _handle_answer(session: Session, index, task: TaskSpec, payload, readonly):
    choices = _require(payload, "choices", list)
    if len(choices) != len(task.questions):
        raise MalformedAction(f"expected {len(task.questions)} answers, got {len(choices)}")
    normalized = []
    for i, (choice, question) in enumerate(zip(choices, task.questions)):
        if not isinstance(choice, list) or not all(isinstance(c, int) for c in choice):
            raise MalformedAction(f"answer {i} must be a list of option indices")
        if any(not 0 <= c < len(question.options) for c in choice):
            raise MalformedAction(f"answer {i} names an option that does not exist")
        normalized.append(sorted(set(choice)))
    keyed = [(c, q) for c, q in zip(normalized, task.questions) if q.key is not None]
    correct = sum(1 for c, q in keyed if set(c) == set(q.key))
    score = correct / len(keyed) if keyed else None
    if not readonly:
        session._task_data[index]["choices"] = normalized
        if score is not None:
            session._task_data[index]["score"] = score
        session._complete(index)
    items = [FeedbackItem(LEVEL_VERDICT, "verdict-message", "task.completed")]
    if score is not None:
        items.append(
            FeedbackItem(
                LEVEL_VERDICT,
                "task-feedback",
                "questionnaire.graded",
                {"correct": correct, "total": len(keyed)},
            )
        )
    report = FeedbackReport("correct", tuple(items))
    extra = {"score": score} if score is not None else {}
    return ActionResult(True, report, task_completed=True, extra=extra)


def _handle_submit_text(session: Session, index, task: TaskSpec, payload, readonly):
    text = _require(payload, "text", str)
    if not readonly:
        session._task_data[index]["text"] = text
        session._complete(index)
    report = FeedbackReport("correct", (FeedbackItem(LEVEL_VERDICT, "verdict-message", "task.completed"),))
    return ActionResult(True, report, task_completed=True)


_HANDLERS = {
    ("PickVariables", "pick-variables"): _handle_pick_variables,
    ("CreateFormulas", "submit-formula"): _handle_submit_formula,
    ("InferenceFormula", "submit-formula"): _handle_inference_formula,
    ("ManualTransformation", "submit-step"): _handle_submit_step,
    ("ManualTransformation", "undo"): _handle_undo,
    ("GuiTransformation", "apply-rule"): _handle_apply_rule,
    ("GuiTransformation", "undo"): _handle_undo,
    ("Resolution", "resolve-step"): _handle_resolve_step,
    ("Message", "acknowledge"): _handle_acknowledge,
    ("Questionnaire", "answer"): _handle_answer,
    ("CollectFeedback", "submit-text"): _handle_submit_text,
}
