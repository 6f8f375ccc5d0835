"""Step-by-step formula transformation tasks.

Two flavours share one state object: the textfield variant accepts any
submitted formula that is equivalent to the original, while the GUI
variant only applies named equivalence rules at a chosen position. The
task is complete once the latest formula satisfies the target (a normal
form, or a specific formula compared modulo commutativity/associativity
of & and |).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormulaSyntaxError, RuleNotApplicable
from .feedback import (
    LEVEL_CHECKS,
    LEVEL_DETAIL,
    LEVEL_VERDICT,
    FeedbackItem,
    FeedbackReport,
    _verdict_item,
    format_assignment,
)
from .formulas import AND, OR, BinOp, Const, Formula, MetaVar, Not, Var, conjoin, disjoin
from .normalforms import is_cnf, is_dnf, is_nnf
from .parser import parse, parse_pattern
from .patterns import instantiate, match_at, rewrite, subformula_at
from .render import render
from .semantics import distinguishing_assignment, equivalent


@dataclass(frozen=True)
class EquivalenceRule:
    id: str
    name_key: str
    lhs: Formula
    rhs: Formula


_RULE_SPECS = [
    # (id, name key, lhs, rhs); bidirectional laws appear as two directed rules.
    ("double-negation-elim", "rule.double-negation", "!!$X", "$X"),
    ("double-negation-intro", "rule.double-negation", "$X", "!!$X"),
    ("de-morgan-and", "rule.de-morgan", "!($X & $Y)", "!$X | !$Y"),
    ("de-morgan-and-rev", "rule.de-morgan", "!$X | !$Y", "!($X & $Y)"),
    ("de-morgan-or", "rule.de-morgan", "!($X | $Y)", "!$X & !$Y"),
    ("de-morgan-or-rev", "rule.de-morgan", "!$X & !$Y", "!($X | $Y)"),
    ("implication-elim", "rule.implication", "$X -> $Y", "!$X | $Y"),
    ("implication-intro", "rule.implication", "!$X | $Y", "$X -> $Y"),
    ("biconditional-elim", "rule.biconditional", "$X <-> $Y", "($X & $Y) | (!$X & !$Y)"),
    ("biconditional-elim-clausal", "rule.biconditional", "$X <-> $Y", "(!$X | $Y) & ($X | !$Y)"),
    ("xor-elim", "rule.xor", "$X xor $Y", "($X & !$Y) | (!$X & $Y)"),
    ("xor-elim-clausal", "rule.xor", "$X xor $Y", "($X | $Y) & (!$X | !$Y)"),
    ("distribute-and-over-or", "rule.distributivity", "$X & ($Y | $Z)", "($X & $Y) | ($X & $Z)"),
    ("distribute-and-over-or-left", "rule.distributivity", "($Y | $Z) & $X", "($Y & $X) | ($Z & $X)"),
    ("distribute-or-over-and", "rule.distributivity", "$X | ($Y & $Z)", "($X | $Y) & ($X | $Z)"),
    ("distribute-or-over-and-left", "rule.distributivity", "($Y & $Z) | $X", "($Y | $X) & ($Z | $X)"),
    ("factor-and", "rule.distributivity", "($X & $Y) | ($X & $Z)", "$X & ($Y | $Z)"),
    ("factor-or", "rule.distributivity", "($X | $Y) & ($X | $Z)", "$X | ($Y & $Z)"),
    ("commute-and", "rule.commutativity", "$X & $Y", "$Y & $X"),
    ("commute-or", "rule.commutativity", "$X | $Y", "$Y | $X"),
    ("absorb-and", "rule.absorption", "$X & ($X | $Y)", "$X"),
    ("absorb-or", "rule.absorption", "$X | ($X & $Y)", "$X"),
    ("idempotence-and", "rule.idempotence", "$X & $X", "$X"),
    ("idempotence-or", "rule.idempotence", "$X | $X", "$X"),
]


def _validate(rule: EquivalenceRule) -> None:
    """Check lhs and rhs are equivalent as schemas by instantiating the
    metavariables with fresh variables."""
    names = sorted({m.name for side in (rule.lhs, rule.rhs) for m in _metavars(side)})
    binding = {name: Var(f"P{i}") for i, name in enumerate(names)}
    if not equivalent(instantiate(rule.lhs, binding), instantiate(rule.rhs, binding)):
        raise AssertionError(f"equivalence rule {rule.id} is unsound")


def _metavars(f: Formula):
    if isinstance(f, MetaVar):
        yield f
    for c in f.children():
        yield from _metavars(c)


_catalogue: tuple[EquivalenceRule, ...] | None = None


def equivalence_catalogue() -> tuple[EquivalenceRule, ...]:
    """The named-rule catalogue, schema-validated on first use."""
    global _catalogue
    if _catalogue is None:
        rules = tuple(
            EquivalenceRule(rid, key, parse_pattern(lhs), parse_pattern(rhs))
            for rid, key, lhs, rhs in _RULE_SPECS
        )
        for rule in rules:
            _validate(rule)
        _catalogue = rules
    return _catalogue


def rule_by_id(rule_id: str) -> EquivalenceRule | None:
    for rule in equivalence_catalogue():
        if rule.id == rule_id:
            return rule
    return None


def ac_normalize(f: Formula) -> Formula:
    """Canonical form modulo commutativity/associativity of & and |:
    same-connective chains are flattened, operands sorted, and rebuilt
    left-associated."""
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Not):
        return Not(ac_normalize(f.child))
    assert isinstance(f, BinOp)
    if f.op not in (AND, OR):
        return BinOp(f.op, ac_normalize(f.left), ac_normalize(f.right))
    parts: list[Formula] = []

    def flatten(node: Formula):
        if isinstance(node, BinOp) and node.op == f.op:
            flatten(node.left)
            flatten(node.right)
        else:
            parts.append(ac_normalize(node))

    flatten(f)
    parts.sort(key=render)
    return conjoin(parts) if f.op == AND else disjoin(parts)


def matches_target(f: Formula, target) -> bool:
    """Target is 'cnf' | 'dnf' | 'nnf' or a specific Formula."""
    if isinstance(target, str):
        return {"cnf": is_cnf, "dnf": is_dnf, "nnf": is_nnf}[target](f)
    return ac_normalize(f) == ac_normalize(target)


@dataclass
class TransformationState:
    original: Formula
    target: object  # 'cnf' | 'dnf' | 'nnf' | Formula
    steps: list[Formula] = field(default_factory=list)

    @property
    def latest(self) -> Formula:
        return self.steps[-1] if self.steps else self.original

    @property
    def complete(self) -> bool:
        return matches_target(self.latest, self.target)


def submit_step(state: TransformationState, candidate_text: str) -> FeedbackReport:
    """Textfield variant: accept any formula equivalent to the original."""
    try:
        candidate = parse(candidate_text)
    except FormulaSyntaxError as err:
        return FeedbackReport(
            "syntactically-wrong",
            (
                _verdict_item(False),
                FeedbackItem(
                    LEVEL_CHECKS,
                    "syntax-message",
                    "syntax.invalid",
                    {"offset": err.offset, "detail": err.expectation},
                ),
            ),
        )
    if not equivalent(state.original, candidate):
        witness = distinguishing_assignment(state.original, candidate)
        return FeedbackReport(
            "semantically-wrong",
            (
                _verdict_item(False),
                FeedbackItem(
                    LEVEL_DETAIL,
                    "counterexample",
                    "counterexample",
                    {"assignment": format_assignment(witness)},
                    assignment=witness,
                ),
            ),
        )
    state.steps.append(candidate)
    key = "transformation.complete" if state.complete else "transformation.accepted"
    return FeedbackReport(
        "correct",
        (_verdict_item(True), FeedbackItem(LEVEL_VERDICT, "verdict-message", key)),
    )


def apply_named_rule(state: TransformationState, rule_id: str, position: tuple[int, ...]) -> Formula:
    """GUI variant: rewrite the latest formula with a catalogue rule at
    `position`; soundness comes from catalogue validation, so no
    per-application equivalence check is run."""
    rule = rule_by_id(rule_id)
    if rule is None:
        raise RuleNotApplicable(rule_id, position)
    current = state.latest
    try:
        node = subformula_at(current, position)
    except Exception:
        raise RuleNotApplicable(rule_id, position) from None
    binding = match_at(rule.lhs, node)
    if binding is None:
        raise RuleNotApplicable(rule_id, position)
    result = rewrite(current, position, rule.rhs, binding)
    state.steps.append(result)
    return result


def undo(state: TransformationState) -> None:
    """Drop the most recent accepted step."""
    if state.steps:
        state.steps.pop()


def check_complete(state: TransformationState) -> tuple[bool, FeedbackReport]:
    done = state.complete
    key = "transformation.complete" if done else "transformation.not-target"
    report = FeedbackReport(
        "correct" if done else "semantically-wrong",
        (FeedbackItem(LEVEL_VERDICT, "verdict-message", key),),
    )
    return done, report
