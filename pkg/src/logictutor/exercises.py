"""Exercise files: model, XML loading/validation, serialization.

An exercise is an ordered pipeline of tasks; task outputs are named values
(variable sets, formulas, formula lists) that later tasks declare as
inputs. The loader validates the wiring (every input must match an
earlier output, outputs are unique), parses all solution formulas, and
maps legacy task-type spellings onto their canonical names. Unknown
attributes are tolerated with a warning; unknown task types are errors.
"""

from __future__ import annotations

import io
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DanglingInput, DuplicateOutput, FormulaSyntaxError, SchemaError
from .formulas import Formula
from .parser import parse
from .render import render

TASK_TYPES = (
    "PickVariables",
    "CreateFormulas",
    "InferenceFormula",
    "ManualTransformation",
    "GuiTransformation",
    "Resolution",
    "Questionnaire",
    "Message",
    "CollectFeedback",
)

# Legacy spellings still found in older exercise files.
TYPE_ALIASES = {
    "CreateFormula": "CreateFormulas",
    "PickVariable": "PickVariables",
    "CompleteFormula": "InferenceFormula",
    "transformToCnf": "ManualTransformation",
    "Questionaire": "Questionnaire",
}

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")

DEFAULT_LEVELS = frozenset({0, 1, 2})


@dataclass(frozen=True)
class OfferedVariable:
    name: str
    meaning: str
    in_solution: bool


@dataclass(frozen=True)
class Statement:
    description: str
    solution: Formula
    kind: str | None = None  # statistics label, e.g. "only-if"


@dataclass(frozen=True)
class Question:
    text: str
    options: tuple[str, ...]
    key: tuple[int, ...] | None = None


@dataclass(frozen=True)
class TaskSpec:
    type: str
    title: str
    description: str
    inputs: tuple[str, ...] = ()
    output: str | None = None
    feedback_levels: frozenset = DEFAULT_LEVELS
    offered: tuple[OfferedVariable, ...] = ()
    statements: tuple[Statement, ...] = ()
    meanings: tuple[tuple[str, str], ...] = ()
    target_kind: str | None = None  # cnf | dnf | nnf | formula
    target_formula: Formula | None = None
    questions: tuple[Question, ...] = ()
    prompt: str = ""

    @property
    def max_level(self) -> int:
        return max(self.feedback_levels) if self.feedback_levels else 0

    def meaning_map(self) -> dict:
        return dict(self.meanings)

    def solution_variables(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.offered if v.in_solution)

    def target(self):
        return self.target_formula if self.target_kind == "formula" else self.target_kind


@dataclass(frozen=True)
class Exercise:
    name: str
    title: str
    description: str
    tasks: tuple[TaskSpec, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)


def _inner_xml(elem: ET.Element) -> str:
    parts = [elem.text or ""]
    for child in elem:
        parts.append(ET.tostring(child, encoding="unicode"))
    return "".join(parts).strip()


_SCRIPTS = re.compile(r"<script\b.*?</script>", re.IGNORECASE | re.DOTALL)
_EVENT_ATTRS = re.compile(r"\son[a-z]+\s*=\s*(\"[^\"]*\"|'[^']*')", re.IGNORECASE)


def _sanitize(fragment: str) -> str:
    return _EVENT_ATTRS.sub("", _SCRIPTS.sub("", fragment))


class _Loader:
    def __init__(self):
        self.warnings: list[str] = []

    def warn(self, path: str, message: str):
        self.warnings.append(f"{path}: {message}")

    def load(self, root: ET.Element) -> Exercise:
        if root.tag != "Exercise":
            raise SchemaError(root.tag, "root element must be <Exercise>")
        name = root.get("name")
        if not name:
            raise SchemaError("Exercise", "missing required attribute 'name'")
        for attr in root.attrib:
            if attr != "name":
                self.warn("Exercise", f"unknown attribute {attr!r} ignored")
        title = ""
        description = ""
        tasks: list[TaskSpec] = []
        task_no = 0
        for child in root:
            if child.tag == "Title":
                title = (child.text or "").strip()
            elif child.tag == "Description":
                description = _sanitize(_inner_xml(child))
            elif child.tag == "Task":
                task_no += 1
                tasks.append(self.load_task(child, f"Exercise/Task[{task_no}]"))
            else:
                self.warn(f"Exercise/{child.tag}", "unknown element ignored")
        exercise = Exercise(name, title, description, tuple(tasks), tuple(self.warnings))
        _validate_pipeline(exercise)
        return exercise

    def load_task(self, elem: ET.Element, path: str) -> TaskSpec:
        raw_type = elem.get("type")
        if not raw_type:
            raise SchemaError(path, "missing required attribute 'type'")
        task_type = TYPE_ALIASES.get(raw_type, raw_type)
        if task_type not in TASK_TYPES:
            raise SchemaError(path, f"unknown task type {raw_type!r}")
        target_kind = "cnf" if raw_type == "transformToCnf" else None

        levels = DEFAULT_LEVELS
        for attr, value in elem.attrib.items():
            if attr == "type":
                continue
            if attr == "feedbackLevels":
                levels = self._parse_levels(value, path)
            elif attr == "assimilationGenerator":
                self.warn(path, f"attribute 'assimilationGenerator'={value!r} accepted but ignored")
            else:
                self.warn(path, f"unknown attribute {attr!r} ignored")

        title = ""
        description = ""
        inputs: list[str] = []
        output: str | None = None
        offered: list[OfferedVariable] = []
        statements: list[Statement] = []
        meanings: list[tuple[str, str]] = []
        target_formula: Formula | None = None
        questions: list[Question] = []
        prompt = ""
        counters: dict[str, int] = {}

        for child in elem:
            counters[child.tag] = counters.get(child.tag, 0) + 1
            child_path = f"{path}/{child.tag}[{counters[child.tag]}]"
            if child.tag == "Title":
                title = (child.text or "").strip()
            elif child.tag == "Description":
                description = _sanitize(_inner_xml(child))
            elif child.tag == "Input":
                inputs.append(self._name(child, child_path))
            elif child.tag == "Output":
                if output is not None:
                    raise SchemaError(child_path, "a task may declare at most one output")
                output = self._name(child, child_path)
            elif child.tag == "Variable" and task_type == "PickVariables":
                offered.append(self._offered_variable(child, child_path))
            elif child.tag == "Formula" and task_type == "CreateFormulas":
                statements.append(self._statement(child, child_path))
            elif child.tag == "FeedbackGenerator":
                meanings.extend(self._feedback_generator(child, child_path))
            elif child.tag == "Target" and task_type in ("ManualTransformation", "GuiTransformation"):
                target_kind, target_formula = self._target(child, child_path)
            elif child.tag == "Question" and task_type == "Questionnaire":
                questions.append(self._question(child, child_path))
            elif child.tag == "Prompt" and task_type == "CollectFeedback":
                prompt = (child.text or "").strip()
            else:
                self.warn(child_path, "unknown element ignored")

        spec = TaskSpec(
            type=task_type,
            title=title,
            description=description,
            inputs=tuple(inputs),
            output=output,
            feedback_levels=levels,
            offered=tuple(offered),
            statements=tuple(statements),
            meanings=tuple(meanings),
            target_kind=target_kind,
            target_formula=target_formula,
            questions=tuple(questions),
            prompt=prompt,
        )
        self._check_payload(spec, path)
        return spec

    def _parse_levels(self, value: str, path: str) -> frozenset:
        try:
            levels = frozenset(int(part.strip()) for part in value.split(",") if part.strip())
        except ValueError:
            raise SchemaError(path, f"feedbackLevels {value!r} is not a comma-separated list of integers") from None
        if not levels:
            raise SchemaError(path, "feedbackLevels must name at least one level")
        return levels

    def _name(self, elem: ET.Element, path: str) -> str:
        name = (elem.text or "").strip()
        if not _NAME_RE.match(name):
            raise SchemaError(path, f"{name!r} is not a valid value name")
        return name

    def _offered_variable(self, elem: ET.Element, path: str) -> OfferedVariable:
        name = elem.get("name")
        if not name or not _NAME_RE.match(name):
            raise SchemaError(path, "Variable requires a valid 'name' attribute")
        in_solution = (elem.get("solution") or "false").lower()
        if in_solution not in ("true", "false"):
            raise SchemaError(path, "attribute 'solution' must be true or false")
        return OfferedVariable(name, (elem.text or "").strip(), in_solution == "true")

    def _statement(self, elem: ET.Element, path: str) -> Statement:
        description = ""
        solution = None
        counters: dict[str, int] = {}
        for child in elem:
            counters[child.tag] = counters.get(child.tag, 0) + 1
            child_path = f"{path}/{child.tag}[{counters[child.tag]}]"
            if child.tag == "Description":
                description = _sanitize(_inner_xml(child))
            elif child.tag == "Solution":
                solution = self._formula((child.text or "").strip(), child_path)
            else:
                self.warn(child_path, "unknown element ignored")
        if solution is None:
            raise SchemaError(path, "Formula requires a <Solution>")
        return Statement(description, solution, elem.get("type"))

    def _formula(self, text: str, path: str) -> Formula:
        try:
            return parse(text)
        except FormulaSyntaxError as err:
            raise SchemaError(path, f"solution does not parse: {err.expectation} at offset {err.offset}") from None

    def _feedback_generator(self, elem: ET.Element, path: str) -> list[tuple[str, str]]:
        meanings: list[tuple[str, str]] = []
        counters: dict[str, int] = {}
        for feedback in elem:
            counters[feedback.tag] = counters.get(feedback.tag, 0) + 1
            fpath = f"{path}/{feedback.tag}[{counters[feedback.tag]}]"
            if feedback.tag != "Feedback":
                self.warn(fpath, "unknown element ignored")
                continue
            ftype = feedback.get("type")
            if ftype != "VariableNames":
                self.warn(fpath, f"unsupported feedback generator type {ftype!r} ignored")
                continue
            for i, variable in enumerate(feedback, start=1):
                vpath = f"{fpath}/Variable[{i}]"
                if variable.tag != "Variable":
                    self.warn(vpath, "unknown element ignored")
                    continue
                name = variable.get("name")
                if not name:
                    raise SchemaError(vpath, "Variable requires a 'name' attribute")
                meanings.append((name, (variable.text or "").strip()))
        return meanings

    def _target(self, elem: ET.Element, path: str):
        kind = elem.get("kind")
        if kind in ("cnf", "dnf", "nnf"):
            return kind, None
        if kind == "formula":
            text = elem.get("formula") or (elem.text or "").strip()
            return "formula", self._formula(text, path)
        raise SchemaError(path, "Target kind must be cnf, dnf, nnf or formula")

    def _question(self, elem: ET.Element, path: str) -> Question:
        text = ""
        options: list[str] = []
        key: list[int] = []
        has_key = False
        counters: dict[str, int] = {}
        for child in elem:
            counters[child.tag] = counters.get(child.tag, 0) + 1
            child_path = f"{path}/{child.tag}[{counters[child.tag]}]"
            if child.tag == "Text":
                text = (child.text or "").strip()
            elif child.tag == "Option":
                correct = (child.get("correct") or "false").lower()
                if correct not in ("true", "false"):
                    raise SchemaError(child_path, "attribute 'correct' must be true or false")
                if correct == "true":
                    key.append(len(options))
                    has_key = True
                options.append((child.text or "").strip())
            else:
                self.warn(child_path, "unknown element ignored")
        if not options:
            raise SchemaError(path, "Question requires at least one Option")
        return Question(text, tuple(options), tuple(key) if has_key else None)

    def _check_payload(self, spec: TaskSpec, path: str):
        t = spec.type
        if t == "PickVariables":
            if not spec.offered:
                raise SchemaError(path, "PickVariables requires at least one Variable")
            names = [v.name for v in spec.offered]
            if len(names) != len(set(names)):
                raise SchemaError(path, "offered variable names must be unique")
        elif t == "CreateFormulas":
            if not spec.statements:
                raise SchemaError(path, "CreateFormulas requires at least one Formula")
            if len(spec.inputs) > 1:
                raise SchemaError(path, "CreateFormulas takes at most one input (the variable set)")
        elif t == "InferenceFormula":
            if len(spec.inputs) < 2:
                raise SchemaError(path, "InferenceFormula needs premise inputs and a conclusion input")
        elif t in ("ManualTransformation", "GuiTransformation"):
            if len(spec.inputs) != 1:
                raise SchemaError(path, f"{t} takes exactly one input formula")
            if spec.target_kind is None:
                raise SchemaError(path, f"{t} requires a <Target>")
        elif t == "Resolution":
            if len(spec.inputs) != 1:
                raise SchemaError(path, "Resolution takes exactly one input formula")
        elif t == "Questionnaire":
            if not spec.questions:
                raise SchemaError(path, "Questionnaire requires at least one Question")


# Value kinds an output can have, used for load-time pipeline typing.
_OUTPUT_KIND = {
    "PickVariables": "variables",
    "CreateFormulas": "formulas",
    "InferenceFormula": "formula",
    "ManualTransformation": "formula",
    "GuiTransformation": "formula",
}


def _validate_pipeline(exercise: Exercise) -> None:
    produced: dict[str, tuple[int, TaskSpec]] = {}
    for i, task in enumerate(exercise.tasks):
        path = f"Exercise/Task[{i + 1}]"
        for j, input_name in enumerate(task.inputs):
            if input_name not in produced:
                raise DanglingInput(f"{path}/Input[{j + 1}]", input_name)
            src_index, src = produced[input_name]
            kind = _OUTPUT_KIND.get(src.type)
            if task.type == "CreateFormulas" and kind != "variables":
                raise SchemaError(f"{path}/Input[{j + 1}]", "CreateFormulas expects a variable-set input")
            if task.type == "InferenceFormula" and kind not in ("formula", "formulas"):
                raise SchemaError(f"{path}/Input[{j + 1}]", "InferenceFormula expects formula inputs")
            if task.type in ("ManualTransformation", "GuiTransformation", "Resolution"):
                if kind == "formulas" and len(src.statements) != 1:
                    raise SchemaError(
                        f"{path}/Input[{j + 1}]",
                        f"{task.type} needs a single formula, but {input_name!r} binds several",
                    )
                if kind == "variables":
                    raise SchemaError(f"{path}/Input[{j + 1}]", f"{task.type} expects a formula input")
        if task.output is not None:
            if task.output in produced:
                raise DuplicateOutput(f"{path}/Output[1]", task.output)
            if task.type not in _OUTPUT_KIND:
                raise SchemaError(f"{path}/Output[1]", f"{task.type} tasks produce no output")
            produced[task.output] = (i, task)


def load_exercise(xml_text: str) -> Exercise:
    """Parse and validate one exercise document."""
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as err:
        raise SchemaError("Exercise", f"not well-formed XML: {err}") from None
    return _Loader().load(root)


def load_exercise_file(path) -> Exercise:
    return load_exercise(Path(path).read_text(encoding="utf-8"))


def _append_fragment(parent: ET.Element, fragment: str) -> None:
    wrapper = ET.fromstring(f"<wrapper>{fragment}</wrapper>")
    parent.text = wrapper.text
    for child in wrapper:
        parent.append(child)


def serialize_exercise(exercise: Exercise) -> str:
    """Write an exercise back to canonical XML (aliases normalized)."""
    root = ET.Element("Exercise", {"name": exercise.name})
    ET.SubElement(root, "Title").text = exercise.title
    _append_fragment(ET.SubElement(root, "Description"), exercise.description)
    for task in exercise.tasks:
        attrs = {
            "type": task.type,
            "feedbackLevels": ",".join(str(l) for l in sorted(task.feedback_levels)),
        }
        elem = ET.SubElement(root, "Task", attrs)
        ET.SubElement(elem, "Title").text = task.title
        _append_fragment(ET.SubElement(elem, "Description"), task.description)
        for name in task.inputs:
            ET.SubElement(elem, "Input").text = name
        for offered in task.offered:
            v = ET.SubElement(
                elem, "Variable", {"name": offered.name, "solution": "true" if offered.in_solution else "false"}
            )
            v.text = offered.meaning
        for statement in task.statements:
            attrs = {"type": statement.kind} if statement.kind else {}
            f = ET.SubElement(elem, "Formula", attrs)
            _append_fragment(ET.SubElement(f, "Description"), statement.description)
            ET.SubElement(f, "Solution").text = render(statement.solution)
        if task.target_kind == "formula":
            ET.SubElement(elem, "Target", {"kind": "formula", "formula": render(task.target_formula)})
        elif task.target_kind is not None:
            ET.SubElement(elem, "Target", {"kind": task.target_kind})
        for question in task.questions:
            q = ET.SubElement(elem, "Question")
            ET.SubElement(q, "Text").text = question.text
            for i, option in enumerate(question.options):
                attrs = {"correct": "true"} if question.key is not None and i in question.key else {}
                ET.SubElement(q, "Option", attrs).text = option
        if task.prompt:
            ET.SubElement(elem, "Prompt").text = task.prompt
        if task.meanings:
            gen = ET.SubElement(elem, "FeedbackGenerator")
            fb = ET.SubElement(gen, "Feedback", {"type": "VariableNames"})
            for name, phrase in task.meanings:
                ET.SubElement(fb, "Variable", {"name": name}).text = phrase
        if task.output is not None:
            ET.SubElement(elem, "Output").text = task.output
    ET.indent(root)
    buffer = io.StringIO()
    ET.ElementTree(root).write(buffer, encoding="unicode", xml_declaration=True)
    return buffer.getvalue() + "\n"


def latex_to_ascii(text: str) -> str:
    """Best-effort conversion of LaTeX-authored solution formulas (legacy
    files wrote e.g. ``$D \\rightarrow B$``) into the ASCII grammar."""
    out = text.strip()
    if out.startswith("$") and out.endswith("$"):
        out = out[1:-1]
    macros = {
        r"\rightarrow": "->",
        r"\Rightarrow": "->",
        r"\implies": "->",
        r"\leftrightarrow": "<->",
        r"\Leftrightarrow": "<->",
        r"\iff": "<->",
        r"\wedge": "&",
        r"\land": "&",
        r"\vee": "|",
        r"\lor": "|",
        r"\oplus": "xor",
        r"\neg": "!",
        r"\lnot": "!",
        r"\top": "true",
        r"\bot": "false",
    }
    for macro, replacement in macros.items():
        out = out.replace(macro, f" {replacement} ")
    return " ".join(out.split())
