"""Declarative reversion rules: rewrites that undo typical modelling mistakes.

Each rule pairs a search pattern with a replacement; applying a matching
rule to a student formula "reverts" one suspected mistake. The catalogue
covers four families:

  * swapping an implication's antecedent and consequent,
  * writing one binary connective where another was meant,
  * a superfluous or missing negation,
  * leaving part of the statement unmodelled (completion rules, built per
    request from solution subformulas the student formula lacks).

Catalogue order is significant: the diagnosis search tries rules in this
order, so the more specific families come first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formulas import (
    AND,
    BINARY_OPS,
    OR,
    BinOp,
    Formula,
    IMP,
    MetaVar,
    Not,
    subformulas,
)
from .render import render

CATEGORY_SWAP = "implication-swap"
CATEGORY_SUBSTITUTION = "operator-substitution"
CATEGORY_NEGATION = "negation"
CATEGORY_COMPLETION = "completion"

_OP_SYMBOL = {"and": "&", "or": "|", "imp": "->", "iff": "<->", "xor": "xor"}

_X = MetaVar("X")
_Y = MetaVar("Y")


@dataclass(frozen=True)
class ReversionRule:
    id: str
    lhs: Formula
    rhs: Formula
    misconception_key: str
    category: str
    # Extra parameters handed to the message templates of this rule.
    params: tuple[tuple[str, str], ...] = field(default=())

    def message_params(self) -> dict[str, str]:
        return dict(self.params)


def _substitution_rule(src: str, dst: str) -> ReversionRule:
    key = "or-instead-of-xor" if (src, dst) == (OR, "xor") else "operator-substitution"
    return ReversionRule(
        id=f"subst-{src}-to-{dst}",
        lhs=BinOp(src, _X, _Y),
        rhs=BinOp(dst, _X, _Y),
        misconception_key=key,
        category=CATEGORY_SUBSTITUTION,
        params=(("student_op", _OP_SYMBOL[src]), ("solution_op", _OP_SYMBOL[dst])),
    )


def base_catalogue() -> tuple[ReversionRule, ...]:
    """The static rules: swap, all operator substitutions, negation fixes."""
    rules = [
        ReversionRule(
            id="implication-swap",
            lhs=BinOp(IMP, _X, _Y),
            rhs=BinOp(IMP, _Y, _X),
            misconception_key="implication-swap",
            category=CATEGORY_SWAP,
        )
    ]
    for src in BINARY_OPS:
        for dst in BINARY_OPS:
            if src != dst:
                rules.append(_substitution_rule(src, dst))
    rules.append(
        ReversionRule(
            id="negation-superfluous",
            lhs=Not(_X),
            rhs=_X,
            misconception_key="negation-superfluous",
            category=CATEGORY_NEGATION,
        )
    )
    rules.append(
        ReversionRule(
            id="negation-missing",
            lhs=_X,
            rhs=Not(_X),
            misconception_key="negation-missing",
            category=CATEGORY_NEGATION,
        )
    )
    return tuple(rules)


def completion_rules(solution: Formula, student: Formula) -> tuple[ReversionRule, ...]:
    """Rules re-attaching solution material the student formula lacks.

    For every distinct proper subformula S of the solution that does not
    occur in the student formula (preorder, outermost first), two rules are
    built: one conjoining S, one disjoining it. The solution itself is not
    offered: conjoining the whole solution "fixes" any implied formula
    without pointing at a real mistake.
    """
    present = set(subformulas(student))
    rules = []
    seen = {solution}
    for part in subformulas(solution):
        if part in seen or part in present:
            continue
        seen.add(part)
        text = render(part)
        for op, tag in ((AND, "and"), (OR, "or")):
            rules.append(
                ReversionRule(
                    id=f"completion-{tag}:{text}",
                    lhs=_X,
                    rhs=BinOp(op, _X, part),
                    misconception_key="missing-part",
                    category=CATEGORY_COMPLETION,
                    params=(("missing", text),),
                )
            )
    return tuple(rules)


def build_catalogue(solution: Formula, student: Formula) -> tuple[ReversionRule, ...]:
    """Full per-request catalogue in diagnosis priority order."""
    return base_catalogue() + completion_rules(solution, student)
