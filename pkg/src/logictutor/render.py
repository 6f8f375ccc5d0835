"""Render formula trees back to text with minimal parentheses.

parse(render(f)) is structurally equal to f (spans aside). Chains of the
left-associative connectives render flat: (A & B) & C comes out as
"A & B & C", while A & (B & C) keeps its parentheses.
"""

from __future__ import annotations

from .formulas import BinOp, Const, Formula, MetaVar, Not, Var

_ASCII = {"and": "&", "or": "|", "xor": "xor", "imp": "->", "iff": "<->"}
_UNICODE = {"and": "∧", "or": "∨", "xor": "⊕", "imp": "→", "iff": "↔"}

# Binding strength; atoms are tightest.
_PREC = {"iff": 0, "imp": 1, "xor": 2, "or": 3, "and": 4}
_NOT_PREC = 5
_ATOM_PREC = 6

_RIGHT_ASSOC = {"imp"}


def _prec(f: Formula) -> int:
    if isinstance(f, BinOp):
        return _PREC[f.op]
    if isinstance(f, Not):
        return _NOT_PREC
    return _ATOM_PREC


def render(f: Formula, style: str = "ascii") -> str:
    """Render f using 'ascii' or 'unicode' connectives."""
    if style == "ascii":
        ops, neg_sym = _ASCII, "!"
    elif style == "unicode":
        ops, neg_sym = _UNICODE, "¬"
    else:
        raise ValueError(f"unknown render style {style!r}")

    def go(node: Formula) -> str:
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Const):
            return "true" if node.value else "false"
        if isinstance(node, MetaVar):
            return f"${node.name}"
        if isinstance(node, Not):
            inner = go(node.child)
            if _prec(node.child) < _NOT_PREC:
                inner = f"({inner})"
            return neg_sym + inner
        assert isinstance(node, BinOp)
        p = _PREC[node.op]
        right_assoc = node.op in _RIGHT_ASSOC
        left = go(node.left)
        right = go(node.right)
        lp = _prec(node.left)
        rp = _prec(node.right)
        if lp < p or (lp == p and right_assoc):
            left = f"({left})"
        if rp < p or (rp == p and not right_assoc):
            right = f"({right})"
        return f"{left} {ops[node.op]} {right}"

    return go(f)
