"""Cascading feedback for formula-modelling answers.

For a wrong formula the cascade is: a verdict, then either a syntax
message or the semantic branch (variable usage checks, then either a
misconception diagnosis found by searching reversion-rule sequences, or a
distinguishing assignment as counterexample). Items carry message keys
plus parameters, never prose; the message catalogue renders them per
language. Every item has a level, and a report only keeps items up to the
configured maximum level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormulaSyntaxError, InvalidMatch, TooManyVariables
from .formulas import BinOp, Const, Formula, MetaVar, Not, Var
from .parser import parse
from .patterns import Match, match_all, match_at, rewrite, subformula_at
from .render import render
from .rules import ReversionRule, build_catalogue
from .semantics import (
    _var_pattern,
    distinguishing_assignment,
    equivalent,
    truth_mask,
    undeclared_variables,
    variable_order,
    variables,
)

LEVEL_VERDICT = 0
LEVEL_CHECKS = 1
LEVEL_DETAIL = 2

DEFAULT_MAX_SEQUENCE = 2
DEFAULT_SEARCH_CAP = 50_000


@dataclass
class FeedbackItem:
    level: int
    kind: str
    key: str
    params: dict = field(default_factory=dict)
    span: tuple[int, int] | None = None
    assignment: dict | None = None

    def to_dict(self) -> dict:
        out = {"level": self.level, "kind": self.kind, "key": self.key, "params": dict(self.params)}
        if self.span is not None:
            out["span"] = [self.span[0], self.span[1]]
        if self.assignment is not None:
            out["assignment"] = {k: bool(v) for k, v in self.assignment.items()}
        return out


@dataclass
class SequenceStep:
    rule: ReversionRule
    match: Match
    result: Formula


@dataclass
class ReversionSequence:
    steps: tuple[SequenceStep, ...]

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> Formula:
        return self.steps[-1].result


@dataclass
class FeedbackReport:
    verdict: str  # correct | syntactically-wrong | semantically-wrong
    items: tuple[FeedbackItem, ...]
    diagnosis: ReversionSequence | None = None

    @property
    def error_class(self) -> str:
        if self.verdict == "correct":
            return "none"
        if self.verdict == "syntactically-wrong":
            return "syntax"
        if self.diagnosis is not None:
            return f"rule-diagnosed:{self.diagnosis.steps[0].rule.id}"
        return "inequivalent"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "items": [item.to_dict() for item in self.items]}


@dataclass
class FeedbackConfig:
    max_level: int = LEVEL_DETAIL
    allowed: tuple[str, ...] | None = None  # None: any variable may be used
    required: tuple[str, ...] | None = None  # None: the solution's variables
    meanings: dict = field(default_factory=dict)
    catalogue: tuple[ReversionRule, ...] | None = None  # None: built per request
    max_sequence_len: int = DEFAULT_MAX_SEQUENCE
    search_cap: int = DEFAULT_SEARCH_CAP


def apply_rule(rule: ReversionRule, f: Formula, match: Match) -> Formula:
    """Apply `rule` to f at a previously found match.

    The match is re-validated: the subformula at the matched position must
    still unify with the rule's pattern under the recorded binding.
    """
    node = subformula_at(f, match.position)
    binding = match_at(rule.lhs, node)
    if binding is None or binding != {k: v for k, v in match.binding.items() if k in binding}:
        raise InvalidMatch(f"match does not fit rule {rule.id} at {list(match.position)}")
    return rewrite(f, match.position, rule.rhs, match.binding)


def _apply_context(ctx: tuple[int, int], mask: int, full: int) -> int:
    val0, val1 = ctx
    return (val0 & (full ^ mask)) | (val1 & mask)


class _SearchFrame:
    """Per-formula tables for the diagnosis search: node masks plus, for
    every position, the root mask as a function of that node's mask.

    Rewriting one node changes the root mask only through that node, and
    bitwise independently per assignment, so the root mask of a candidate
    rewrite is (val0 & ~m) | (val1 & m) where (val0, val1) is the node's
    context and m the new subtree's mask. One candidate costs a handful of
    integer operations instead of a full re-evaluation.
    """

    def __init__(self, f: Formula, order: tuple[str, ...], full: int):
        self.order = order
        self.full = full
        self.index = {name: i for i, name in enumerate(order)}
        self.masks: dict[tuple[int, ...], int] = {}
        self.ctx: dict[tuple[int, ...], tuple[int, int]] = {}
        self._node_mask_cache: dict[int, int] = {}
        self._fill_masks(f, ())
        self._fill_ctx(f, (), (0, full))

    def _fill_masks(self, node: Formula, path: tuple[int, ...]) -> int:
        if isinstance(node, Var):
            mask = _var_pattern(self.index[node.name], len(self.order))
        elif isinstance(node, Const):
            mask = self.full if node.value else 0
        elif isinstance(node, Not):
            mask = self.full ^ self._fill_masks(node.child, path + (0,))
        else:
            assert isinstance(node, BinOp)
            left = self._fill_masks(node.left, path + (0,))
            right = self._fill_masks(node.right, path + (1,))
            mask = _binop_mask(node.op, left, right, self.full)
        self.masks[path] = mask
        self._node_mask_cache[id(node)] = mask
        return mask

    def _fill_ctx(self, node: Formula, path: tuple[int, ...], ctx: tuple[int, int]):
        self.ctx[path] = ctx
        if isinstance(node, Not):
            # Negation flips which context mask applies.
            self._fill_ctx(node.child, path + (0,), (ctx[1], ctx[0]))
            return
        if isinstance(node, BinOp):
            full = self.full
            left_mask = self.masks[path + (0,)]
            right_mask = self.masks[path + (1,)]
            left_ctx = (
                _apply_context(ctx, _binop_mask(node.op, 0, right_mask, full), full),
                _apply_context(ctx, _binop_mask(node.op, full, right_mask, full), full),
            )
            self._fill_ctx(node.left, path + (0,), left_ctx)
            right_ctx = (
                _apply_context(ctx, _binop_mask(node.op, left_mask, 0, full), full),
                _apply_context(ctx, _binop_mask(node.op, left_mask, full, full), full),
            )
            self._fill_ctx(node.right, path + (1,), right_ctx)

    def instance_mask(self, pattern: Formula, binding: dict[str, Formula]) -> int:
        """Mask of a rule's instantiated right-hand side, reusing the cached
        masks of the bound subformulas."""
        full = self.full
        if isinstance(pattern, MetaVar):
            bound = binding[pattern.name]
            cached = self._node_mask_cache.get(id(bound))
            if cached is None:
                cached = truth_mask(bound, self.order)
                self._node_mask_cache[id(bound)] = cached
            return cached
        if isinstance(pattern, Var):
            return _var_pattern(self.index[pattern.name], len(self.order))
        if isinstance(pattern, Const):
            return full if pattern.value else 0
        if isinstance(pattern, Not):
            return full ^ self.instance_mask(pattern.child, binding)
        assert isinstance(pattern, BinOp)
        a = self.instance_mask(pattern.left, binding)
        b = self.instance_mask(pattern.right, binding)
        return _binop_mask(pattern.op, a, b, full)


def _binop_mask(op: str, left: int, right: int, full: int) -> int:
    if op == "and":
        return left & right
    if op == "or":
        return left | right
    if op == "imp":
        return (full ^ left) | right
    if op == "iff":
        return full ^ (left ^ right)
    if op == "xor":
        return left ^ right
    raise AssertionError(op)


def find_reversion(
    student: Formula,
    solution: Formula,
    catalogue: tuple[ReversionRule, ...],
    max_len: int = DEFAULT_MAX_SEQUENCE,
    cap: int = DEFAULT_SEARCH_CAP,
) -> ReversionSequence | None:
    """Breadth-first search for a rule sequence turning `student` into a
    formula equivalent to `solution`.

    Shorter sequences win; ties break by catalogue order, then by
    leftmost-outermost match position. Returns None when no sequence of
    length <= max_len exists or the rewrite budget `cap` runs out.
    """
    order = variable_order(student, solution)
    full = (1 << (1 << len(order))) - 1
    solution_mask = truth_mask(solution, order)

    frontier: list[tuple[Formula, tuple[SequenceStep, ...]]] = [(student, ())]
    seen: set[Formula] = {student}
    budget = cap

    for depth in range(1, max_len + 1):
        next_frontier: list[tuple[Formula, tuple[SequenceStep, ...]]] = []
        for current, steps in frontier:
            frame = _SearchFrame(current, order, full)
            for rule in catalogue:
                for match in match_all(rule.lhs, current):
                    if budget <= 0:
                        return None
                    budget -= 1
                    rhs_mask = frame.instance_mask(rule.rhs, match.binding)
                    root_mask = _apply_context(frame.ctx[match.position], rhs_mask, full)
                    if root_mask == solution_mask:
                        result = rewrite(current, match.position, rule.rhs, match.binding)
                        return ReversionSequence(steps + (SequenceStep(rule, match, result),))
                    if depth < max_len:
                        result = rewrite(current, match.position, rule.rhs, match.binding)
                        if result not in seen:
                            seen.add(result)
                            next_frontier.append(
                                (result, steps + (SequenceStep(rule, match, result),))
                            )
        frontier = next_frontier
    return None


def check_variables(
    student: Formula,
    allowed: tuple[str, ...] | None,
    required: tuple[str, ...] | None,
    meanings: dict | None = None,
) -> list[FeedbackItem]:
    """Items for undeclared variables used and required variables unused."""
    meanings = meanings or {}
    used = variables(student)
    items = []
    if allowed is not None:
        for name in undeclared_variables(student, allowed):
            items.append(
                FeedbackItem(
                    LEVEL_CHECKS,
                    "variable-usage",
                    "variables.unknown",
                    {"name": name, "meaning": _phrase(meanings, name)},
                )
            )
    if required is not None:
        used_set = set(used)
        for name in required:
            if name not in used_set:
                items.append(
                    FeedbackItem(
                        LEVEL_CHECKS,
                        "variable-usage",
                        "variables.missing",
                        {"name": name, "meaning": _phrase(meanings, name)},
                    )
                )
    return items


def _phrase(meanings: dict, name: str) -> str:
    phrase = meanings.get(name)
    return f" ({phrase})" if phrase else ""


def format_assignment(assignment: dict) -> str:
    return ", ".join(f"{name}={'true' if value else 'false'}" for name, value in assignment.items())


def _verdict_item(correct: bool) -> FeedbackItem:
    key = "verdict.correct" if correct else "verdict.wrong"
    return FeedbackItem(LEVEL_VERDICT, "verdict-message", key)


def generate_feedback(student_text: str, solution: Formula, config: FeedbackConfig) -> FeedbackReport:
    """Run the full feedback cascade on one submitted formula text.

    Never raises: every failure mode (syntax errors, unverifiable inputs,
    missing diagnosis) becomes feedback items.
    """
    try:
        student = parse(student_text)
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
        return FeedbackReport("syntactically-wrong", _capped(items, config.max_level))

    try:
        if equivalent(student, solution):
            return FeedbackReport("correct", _capped([_verdict_item(True)], config.max_level))
    except TooManyVariables as err:
        items = [
            _verdict_item(False),
            FeedbackItem(
                LEVEL_CHECKS,
                "variable-usage",
                "check.too-many-variables",
                {"count": err.count, "limit": err.limit},
            ),
        ]
        return FeedbackReport("semantically-wrong", _capped(items, config.max_level))

    items = [_verdict_item(False)]
    required = config.required if config.required is not None else variables(solution)
    items.extend(check_variables(student, config.allowed, required, config.meanings))

    catalogue = config.catalogue if config.catalogue is not None else build_catalogue(solution, student)
    sequence = find_reversion(
        student, solution, catalogue, config.max_sequence_len, config.search_cap
    )
    if sequence is not None:
        first = sequence.steps[0]
        params = first.rule.message_params()
        items.append(
            FeedbackItem(
                LEVEL_DETAIL,
                "misconception-general",
                f"misconception.{first.rule.misconception_key}.general",
                dict(params),
            )
        )
        items.append(
            FeedbackItem(
                LEVEL_DETAIL,
                "misconception-precise",
                f"misconception.{first.rule.misconception_key}.precise",
                dict(params),
            )
        )
        span = first.match.span
        snippet = student_text[span[0] : span[1]] if span is not None else render(student)
        items.append(
            FeedbackItem(
                LEVEL_DETAIL,
                "highlight",
                "highlight.wrong-part",
                {"snippet": snippet},
                span=span,
            )
        )
    else:
        witness = distinguishing_assignment(student, solution, order=config.allowed)
        # witness cannot be None here: the formulas are not equivalent.
        items.append(
            FeedbackItem(
                LEVEL_DETAIL,
                "counterexample",
                "counterexample",
                {"assignment": format_assignment(witness)},
                assignment=witness,
            )
        )
    return FeedbackReport("semantically-wrong", _capped(items, config.max_level), diagnosis=sequence)


def _capped(items: list[FeedbackItem], max_level: int) -> tuple[FeedbackItem, ...]:
    return tuple(item for item in items if item.level <= max_level)
