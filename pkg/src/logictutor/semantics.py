"""Truth-functional semantics: evaluation, equivalence, counterexamples.

Exhaustive checks are bitmask truth tables: an assignment is an index
j in [0, 2^v), where variable number i (in declaration order) has value
bit i of j, and a formula's semantics over a variable order is the integer
whose j-th bit is the formula's value under assignment j. All-false is
assignment 0, so enumeration order is the ascending binary counter the
rest of the engine relies on for deterministic counterexamples.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping

from .errors import TooManyVariables, UndeclaredVariable
from .formulas import AND, IFF, IMP, OR, XOR, BinOp, Const, Formula, Not, Var

# 2^16 truth-table rows; beyond that exhaustive checking is refused loudly
# instead of silently crawling.
MAX_VARS = 16


def variables(f: Formula) -> tuple[str, ...]:
    """Variable names occurring in f, in first-occurrence order."""
    seen: dict[str, None] = {}

    def walk(node: Formula):
        if isinstance(node, Var):
            seen.setdefault(node.name, None)
        for c in node.children():
            walk(c)

    walk(f)
    return tuple(seen)


def variable_order(*formulas: Formula) -> tuple[str, ...]:
    """First-occurrence variable order over several formulas combined."""
    seen: dict[str, None] = {}
    for f in formulas:
        for name in variables(f):
            seen.setdefault(name, None)
    return tuple(seen)


def undeclared_variables(f: Formula, allowed) -> tuple[str, ...]:
    """Variables of f outside the allowed set, in first-occurrence order.

    Parsing never rejects these (flagging them is the variable-usage
    feedback generator's job); this is where they are collected.
    """
    allowed_set = set(allowed)
    return tuple(name for name in variables(f) if name not in allowed_set)


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Evaluate under a total assignment; missing variables are errors."""
    if isinstance(f, Var):
        try:
            return bool(assignment[f.name])
        except KeyError:
            raise UndeclaredVariable(f.name) from None
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.child, assignment)
    assert isinstance(f, BinOp)
    a = evaluate(f.left, assignment)
    b = evaluate(f.right, assignment)
    if f.op == AND:
        return a and b
    if f.op == OR:
        return a or b
    if f.op == IMP:
        return (not a) or b
    if f.op == IFF:
        return a == b
    if f.op == XOR:
        return a != b
    raise AssertionError(f.op)


@lru_cache(maxsize=None)
def _var_pattern(index: int, n_vars: int) -> int:
    # One period is 2^index zeros followed by 2^index ones; double until
    # the full 2^n_vars width is covered.
    block = 1 << index
    pattern = ((1 << block) - 1) << block
    size = block * 2
    width = 1 << n_vars
    while size < width:
        pattern |= pattern << size
        size *= 2
    return pattern


def _check_width(n_vars: int) -> None:
    if n_vars > MAX_VARS:
        raise TooManyVariables(n_vars, MAX_VARS)


def truth_mask(f: Formula, order: tuple[str, ...]) -> int:
    """Bitmask of f's truth value over every assignment of `order`."""
    _check_width(len(order))
    n = len(order)
    full = (1 << (1 << n)) - 1
    index = {name: i for i, name in enumerate(order)}

    def go(node: Formula) -> int:
        if isinstance(node, Var):
            try:
                return _var_pattern(index[node.name], n)
            except KeyError:
                raise UndeclaredVariable(node.name) from None
        if isinstance(node, Const):
            return full if node.value else 0
        if isinstance(node, Not):
            return full ^ go(node.child)
        assert isinstance(node, BinOp)
        a = go(node.left)
        b = go(node.right)
        if node.op == AND:
            return a & b
        if node.op == OR:
            return a | b
        if node.op == IMP:
            return (full ^ a) | b
        if node.op == IFF:
            return full ^ (a ^ b)
        if node.op == XOR:
            return a ^ b
        raise AssertionError(node.op)

    return go(f)


def assignment_at(row: int, order: tuple[str, ...]) -> dict[str, bool]:
    """The assignment with index `row` in the canonical enumeration."""
    return {name: bool((row >> i) & 1) for i, name in enumerate(order)}


def equivalent(f: Formula, g: Formula) -> bool:
    """True iff f and g agree on every assignment of their combined variables."""
    order = variable_order(f, g)
    return truth_mask(f, order) == truth_mask(g, order)


def distinguishing_assignment(
    f: Formula, g: Formula, order: tuple[str, ...] | None = None
) -> dict[str, bool] | None:
    """First assignment (canonical enumeration) where f and g differ.

    Returns None iff the formulas are equivalent. An explicit `order` pins
    the enumeration to an exercise's variable declaration order; variables
    not listed there are appended in first-occurrence order.
    """
    occurring = variable_order(f, g)
    if order is None:
        order = occurring
    else:
        order = tuple(order) + tuple(n for n in occurring if n not in order)
    diff = truth_mask(f, order) ^ truth_mask(g, order)
    if diff == 0:
        return None
    row = (diff & -diff).bit_length() - 1
    return assignment_at(row, order)


def satisfiable(f: Formula) -> bool:
    order = variables(f)
    return truth_mask(f, order) != 0
