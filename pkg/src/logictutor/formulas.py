"""Propositional formula trees.

Nodes are immutable; structural equality ignores source spans, so a parsed
formula compares equal to the same formula built programmatically or
re-parsed from a rendering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Character range (start, end) into the source text a node was parsed from.
# Synthetic nodes (built by rewrites or conversions) carry None.
Span = "tuple[int, int] | None"

AND = "and"
OR = "or"
IMP = "imp"
IFF = "iff"
XOR = "xor"

# Canonical connective order; rule catalogues and renderers rely on it.
BINARY_OPS = (AND, OR, IMP, IFF, XOR)


class Formula:
    """Base class for Var, Const, Not, BinOp and the pattern-only MetaVar."""

    span = None

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from .render import render

        return render(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str
    span: "Span" = field(default=None, compare=False)


@dataclass(frozen=True)
class Const(Formula):
    value: bool
    span: "Span" = field(default=None, compare=False)


@dataclass(frozen=True)
class Not(Formula):
    child: Formula
    span: "Span" = field(default=None, compare=False)

    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


@dataclass(frozen=True)
class BinOp(Formula):
    op: str
    left: Formula
    right: Formula
    span: "Span" = field(default=None, compare=False)

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class MetaVar(Formula):
    """Pattern placeholder ($X); matches an arbitrary subformula.

    Only valid inside rewrite-rule patterns, never in student or solution
    formulas.
    """

    name: str
    span: "Span" = field(default=None, compare=False)


def var(name: str) -> Var:
    return Var(name)


def const(value: bool) -> Const:
    return Const(value)


def neg(f: Formula) -> Not:
    return Not(f)


def conj(a: Formula, b: Formula) -> BinOp:
    return BinOp(AND, a, b)


def disj(a: Formula, b: Formula) -> BinOp:
    return BinOp(OR, a, b)


def imp(a: Formula, b: Formula) -> BinOp:
    return BinOp(IMP, a, b)


def iff(a: Formula, b: Formula) -> BinOp:
    return BinOp(IFF, a, b)


def xor(a: Formula, b: Formula) -> BinOp:
    return BinOp(XOR, a, b)


def conjoin(parts: "list[Formula]") -> Formula:
    """Left-associated conjunction of one or more formulas."""
    if not parts:
        return Const(True)
    out = parts[0]
    for p in parts[1:]:
        out = BinOp(AND, out, p)
    return out


def disjoin(parts: "list[Formula]") -> Formula:
    if not parts:
        return Const(False)
    out = parts[0]
    for p in parts[1:]:
        out = BinOp(OR, out, p)
    return out


def subformulas(f: Formula):
    """All subformulas of f in preorder (f itself first)."""
    yield f
    for c in f.children():
        yield from subformulas(c)


def node_count(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def contains_metavars(f: Formula) -> bool:
    return any(isinstance(s, MetaVar) for s in subformulas(f))
