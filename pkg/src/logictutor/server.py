"""HTTP service exposing the exercise engine.

Resources:

    GET  /exercises                         list (id, title)
    GET  /exercises/{id}                    student view, solutions stripped
    POST /sessions        {exercise, group} -> {session}
    GET  /sessions/{id}                     current state view
    POST /sessions/{id}/actions?lang=..     dispatch one action
    GET  /stats?exercise=..&group=..        error statistics

Bodies are JSON with snake_case field names; unknown input fields are
ignored and never echoed. Every action is appended to the event log
(durably) before its response is sent. One action per session may be in
flight; concurrent submissions get 409.
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServiceConfig
from .errors import (
    LogicTutorError,
    MalformedAction,
    SchemaError,
    TaskNotActive,
    UnknownClause,
    UnknownOption,
)
from .exercises import Exercise, TaskSpec, load_exercise, load_exercise_file
from .formulas import BinOp, Const, Formula, Not, Var
from .messages import MessageCatalogue, default_catalogue
from .render import render
from .resolution import ResolutionState, clause_literals
from .sessions import Action, ActionResult, Session, start_session
from .stats import compute_stats
from .transform import TransformationState, equivalence_catalogue
from .eventlog import EventLogWriter, read_events


def formula_tree(f: Formula) -> dict:
    """Nested wire form of a formula; child order matches rewrite positions."""
    if isinstance(f, Var):
        return {"node": "var", "name": f.name, "text": render(f)}
    if isinstance(f, Const):
        return {"node": "const", "value": f.value, "text": render(f)}
    if isinstance(f, Not):
        return {"node": "not", "children": [formula_tree(f.child)], "text": render(f)}
    assert isinstance(f, BinOp)
    return {
        "node": f.op,
        "children": [formula_tree(f.left), formula_tree(f.right)],
        "text": render(f),
    }


def statement_label(task: TaskSpec, task_index: int, statement_index: int | None) -> str:
    if statement_index is not None and task.statements:
        kind = task.statements[statement_index].kind
        if kind:
            return kind
        return f"task{task_index}.stmt{statement_index}"
    return f"task{task_index}"


def exercise_view(exercise: Exercise) -> dict:
    """Student-facing exercise description; never includes solutions."""
    tasks = []
    for i, task in enumerate(exercise.tasks):
        view: dict = {
            "index": i,
            "type": task.type,
            "title": task.title,
            "description": task.description,
            "inputs": list(task.inputs),
            "output": task.output,
            "feedback_levels": sorted(task.feedback_levels),
        }
        if task.type == "PickVariables":
            view["offered"] = [{"name": v.name, "meaning": v.meaning} for v in task.offered]
        if task.type == "CreateFormulas":
            view["statements"] = [
                {"index": j, "description": s.description} for j, s in enumerate(task.statements)
            ]
        if task.type in ("ManualTransformation", "GuiTransformation"):
            view["target"] = (
                {"kind": "formula", "formula": render(task.target_formula)}
                if task.target_kind == "formula"
                else {"kind": task.target_kind}
            )
        if task.type == "GuiTransformation":
            view["rules"] = [{"id": r.id, "name_key": r.name_key} for r in equivalence_catalogue()]
        if task.type == "Questionnaire":
            view["questions"] = [
                {"text": q.text, "options": list(q.options)} for q in task.questions
            ]
        if task.type == "CollectFeedback":
            view["prompt"] = task.prompt
        tasks.append(view)
    return {
        "id": exercise.name,
        "title": exercise.title,
        "description": exercise.description,
        "tasks": tasks,
    }


def session_view(session: Session) -> dict:
    exercise = session.exercise
    base = exercise_view(exercise)
    tasks = []
    for i, task_view in enumerate(base["tasks"]):
        task = exercise.tasks[i]
        view = dict(task_view)
        view["status"] = session.status(i)
        data = session._task_data[i]
        if task.type == "CreateFormulas":
            accepted = data["accepted"]
            for statement in view["statements"]:
                text = accepted[statement["index"]]
                statement["accepted"] = text is not None
                statement["text"] = text
        if task.type == "PickVariables" and data.get("chosen") is not None:
            view["chosen"] = list(data["chosen"])
        if view["status"] != "not-started":
            if task.type in ("ManualTransformation", "GuiTransformation"):
                state: TransformationState = session._runtime(i)
                view["original"] = render(state.original)
                view["steps"] = [render(s) for s in state.steps]
                view["current"] = render(state.latest)
                view["complete"] = state.complete
                if task.type == "GuiTransformation":
                    view["tree"] = formula_tree(state.latest)
            elif task.type == "Resolution":
                state: ResolutionState = session._runtime(i)
                view["clauses"] = [
                    {
                        "id": n.id,
                        "literals": clause_literals(n.clause),
                        "parents": list(n.parents) if n.parents else None,
                        "pivot": n.pivot,
                    }
                    for n in state.nodes
                ]
                view["goal_reached"] = state.goal_reached
            elif task.type == "InferenceFormula":
                premises = []
                for name in task.inputs[:-1]:
                    premises.extend(render(f) for f in session._formula_list(name))
                view["premises"] = premises
                view["conclusion"] = render(session._single_formula(task.inputs[-1]))
        tasks.append(view)
    env = {}
    for name, value in session.env.items():
        if isinstance(value, Formula):
            env[name] = {"kind": "formula", "text": render(value)}
        elif value and all(isinstance(v, Formula) for v in value):
            env[name] = {"kind": "formulas", "texts": [render(v) for v in value]}
        else:
            env[name] = {"kind": "variables", "names": list(value)}
    return {
        "session": session.id,
        "exercise": exercise.name,
        "group": session.group,
        "current": session.current,
        "completed": session.completed,
        "tasks": tasks,
        "environment": env,
    }


def result_wire(
    result: ActionResult, session: Session, catalogue: MessageCatalogue, language: str
) -> dict:
    out = {
        "accepted": result.accepted,
        "verdict": result.report.verdict if result.report else None,
        "items": catalogue.resolve_items(result.report.items, language) if result.report else [],
        "task_completed": result.task_completed,
        "session_completed": result.session_completed,
        "current_task": session.current,
        "error_class": result.error_class,
    }
    if result.statement_index is not None:
        out["statement"] = result.statement_index
    out.update(result.extra)
    return out


class SessionBody(BaseModel):
    exercise: str
    group: str = ""


class ActionBody(BaseModel):
    task: int
    kind: str
    payload: dict = {}


def load_exercise_store(config: ServiceConfig) -> dict[str, Exercise]:
    store: dict[str, Exercise] = {}
    if config.exercise_dir:
        files = sorted(Path(config.exercise_dir).glob("*.xml"))
        for file in files:
            exercise = load_exercise_file(file)
            if exercise.name in store:
                raise SchemaError("Exercise", f"duplicate exercise name {exercise.name!r} in {file}")
            store[exercise.name] = exercise
    else:
        data = resources.files("logictutor").joinpath("data/exercises")
        for entry in sorted(data.iterdir(), key=lambda e: e.name):
            if entry.name.endswith(".xml"):
                exercise = load_exercise(entry.read_text(encoding="utf-8"))
                store[exercise.name] = exercise
    return store


class SessionStore:
    def __init__(self, config: ServiceConfig, exercises: dict[str, Exercise]):
        self.config = config
        self.exercises = exercises
        self.sessions: dict[str, Session] = {}
        self.locks: dict[str, threading.Lock] = {}
        self._counter = 0
        self._store_lock = threading.Lock()
        self._actions_since_snapshot = 0
        self._load_snapshot()

    def create(self, exercise: Exercise, group: str) -> Session:
        import uuid

        with self._store_lock:
            session_id = uuid.uuid4().hex
            session = start_session(
                exercise,
                session_id,
                group,
                search_cap=self.config.search_cap,
                max_sequence_len=self.config.search_max_len,
            )
            self.sessions[session_id] = session
            self.locks[session_id] = threading.Lock()
            return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    def lock(self, session_id: str) -> threading.Lock:
        return self.locks[session_id]

    def after_action(self) -> None:
        with self._store_lock:
            self._actions_since_snapshot += 1
            if self._actions_since_snapshot >= self.config.snapshot_every:
                self._actions_since_snapshot = 0
                self.write_snapshot()

    def write_snapshot(self) -> None:
        path = Path(self.config.snapshot_path)
        payload = {
            "version": 1,
            "sessions": {sid: s.snapshot() for sid, s in sorted(self.sessions.items())},
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, sort_keys=True, ensure_ascii=False), encoding="utf-8")

    def _load_snapshot(self) -> None:
        path = Path(self.config.snapshot_path)
        if not path.exists():
            return
        payload = json.loads(path.read_text(encoding="utf-8"))
        for sid, snap in payload.get("sessions", {}).items():
            exercise = self.exercises.get(snap.get("exercise"))
            if exercise is None:
                continue
            self.sessions[sid] = Session.restore(
                exercise,
                snap,
                search_cap=self.config.search_cap,
                max_sequence_len=self.config.search_max_len,
            )
            self.locks[sid] = threading.Lock()


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    exercises = load_exercise_store(config)
    store = SessionStore(config, exercises)
    catalogue = default_catalogue()
    log = EventLogWriter(config.log_path)

    @asynccontextmanager
    async def lifespan(_app):
        yield
        store.write_snapshot()
        log.close()

    app = FastAPI(title="logictutor", lifespan=lifespan)
    app.state.config = config
    app.state.store = store
    app.state.log = log

    @app.exception_handler(LogicTutorError)
    async def engine_error(request, err: LogicTutorError):
        if isinstance(err, TaskNotActive):
            return JSONResponse(status_code=409, content={"error": "task-not-active", "detail": str(err)})
        if isinstance(err, (MalformedAction, UnknownOption, UnknownClause)):
            return JSONResponse(status_code=422, content={"error": "malformed-action", "detail": str(err)})
        return JSONResponse(status_code=422, content={"error": "engine-error", "detail": str(err)})

    @app.get("/exercises")
    def list_exercises():
        return {
            "exercises": [
                {"id": ex.name, "title": ex.title} for ex in sorted(exercises.values(), key=lambda e: e.name)
            ]
        }

    @app.get("/exercises/{exercise_id}")
    def get_exercise(exercise_id: str):
        exercise = exercises.get(exercise_id)
        if exercise is None:
            raise HTTPException(status_code=404, detail="unknown exercise")
        return exercise_view(exercise)

    @app.post("/sessions")
    def create_session(body: SessionBody):
        exercise = exercises.get(body.exercise)
        if exercise is None:
            raise HTTPException(status_code=404, detail="unknown exercise")
        session = store.create(exercise, body.group)
        return {"session": session.id}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            session = store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session") from None
        return session_view(session)

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, body: ActionBody, lang: str = Query(default=None)):
        try:
            session = store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session") from None
        language = lang or config.default_language
        lock = store.lock(session_id)
        if not lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="session is busy, retry")
        try:
            action = Action(body.task, body.kind, dict(body.payload))
            result = session.dispatch(action)
            task = session.exercise.tasks[body.task]
            text = body.payload.get("text")
            if not isinstance(text, str):
                text = json.dumps(body.payload, sort_keys=True, ensure_ascii=False)
            try:
                log.append(
                    session=session.id,
                    group=session.group,
                    exercise=session.exercise.name,
                    task=body.task,
                    statement=result.statement_index,
                    label=statement_label(task, body.task, result.statement_index),
                    action=body.kind,
                    accepted=result.accepted,
                    error=result.error_class,
                    text=text,
                )
            except OSError as err:
                raise HTTPException(status_code=503, detail=f"event log unavailable: {err}") from None
            store.after_action()
            return result_wire(result, session, catalogue, language)
        finally:
            lock.release()

    @app.get("/stats")
    def get_stats(exercise: str = Query(default=None), group: str = Query(default=None)):
        try:
            events = list(read_events(config.log_path)) if Path(config.log_path).exists() else []
        except LogicTutorError as err:
            raise HTTPException(status_code=500, detail=str(err)) from None
        rows = compute_stats(events, exercise=exercise, group=group)
        return {"rows": [row.to_dict() for row in rows]}

    if config.frontend_dir and Path(config.frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.frontend_dir, html=True), name="ui")

    return app
