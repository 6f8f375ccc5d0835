"""Pattern matching and rewriting on formula trees.

A pattern is a formula tree whose leaves may be MetaVar placeholders.
A metavariable matches any subformula; a name repeated within one pattern
must bind structurally equal subformulas. Positions are paths of child
indices from the root (the root itself is the empty path).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator

from .errors import InvalidMatch
from .formulas import BinOp, Const, Formula, MetaVar, Not, Var


@dataclass
class Match:
    """One occurrence of a pattern: where, what the metavariables bound,
    and which stretch of the original source text it covers (the nearest
    enclosing real span when the node itself is synthetic)."""

    position: tuple[int, ...]
    binding: dict[str, Formula]
    span: tuple[int, int] | None


def positions(f: Formula) -> Iterator[tuple[tuple[int, ...], Formula]]:
    """All (path, node) pairs in preorder: outermost first, then left to right."""

    def walk(node: Formula, path: tuple[int, ...]):
        yield path, node
        for i, child in enumerate(node.children()):
            yield from walk(child, path + (i,))

    yield from walk(f, ())


def subformula_at(f: Formula, position: tuple[int, ...]) -> Formula:
    node = f
    for i in position:
        children = node.children()
        if i >= len(children):
            raise InvalidMatch(f"no child {i} under {node}")
        node = children[i]
    return node


def replace_at(f: Formula, position: tuple[int, ...], replacement: Formula) -> Formula:
    """Rebuild f with `replacement` at `position`; untouched nodes are shared."""
    if not position:
        return replacement
    i, rest = position[0], position[1:]
    if isinstance(f, Not):
        if i != 0:
            raise InvalidMatch(f"no child {i} under a negation")
        return Not(replace_at(f.child, rest, replacement), span=f.span)
    if isinstance(f, BinOp):
        if i == 0:
            return BinOp(f.op, replace_at(f.left, rest, replacement), f.right, span=f.span)
        if i == 1:
            return BinOp(f.op, f.left, replace_at(f.right, rest, replacement), span=f.span)
        raise InvalidMatch(f"no child {i} under a binary connective")
    raise InvalidMatch(f"no child {i} under a leaf")


def match_at(pattern: Formula, f: Formula) -> dict[str, Formula] | None:
    """Unify pattern against f at the root; None when they do not match."""
    binding: dict[str, Formula] = {}

    def unify(p: Formula, node: Formula) -> bool:
        if isinstance(p, MetaVar):
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = node
                return True
            return bound == node
        if isinstance(p, Var):
            return isinstance(node, Var) and node.name == p.name
        if isinstance(p, Const):
            return isinstance(node, Const) and node.value == p.value
        if isinstance(p, Not):
            return isinstance(node, Not) and unify(p.child, node.child)
        assert isinstance(p, BinOp)
        return (
            isinstance(node, BinOp)
            and node.op == p.op
            and unify(p.left, node.left)
            and unify(p.right, node.right)
        )

    return binding if unify(pattern, f) else None


def _span_along(f: Formula, position: tuple[int, ...]) -> tuple[int, int] | None:
    """Span of the node at `position`, falling back outward to the nearest
    ancestor that still has one."""
    best = f.span
    node = f
    for i in position:
        node = node.children()[i]
        if node.span is not None:
            best = node.span
    return best


def match_all(pattern: Formula, f: Formula) -> list[Match]:
    """Every match of pattern in f, in leftmost-outermost (preorder) order."""
    out = []
    for path, node in positions(f):
        binding = match_at(pattern, node)
        if binding is not None:
            out.append(Match(path, binding, _span_along(f, path)))
    return out


def instantiate(pattern: Formula, binding: dict[str, Formula]) -> Formula:
    """Replace metavariables by their bound formulas; the result is synthetic
    (no source spans)."""
    if isinstance(pattern, MetaVar):
        try:
            return binding[pattern.name]
        except KeyError:
            raise InvalidMatch(f"unbound metavariable ${pattern.name}") from None
    if isinstance(pattern, Var):
        return Var(pattern.name)
    if isinstance(pattern, Const):
        return Const(pattern.value)
    if isinstance(pattern, Not):
        return Not(instantiate(pattern.child, binding))
    assert isinstance(pattern, BinOp)
    return BinOp(
        pattern.op,
        instantiate(pattern.left, binding),
        instantiate(pattern.right, binding),
    )


def rewrite(f: Formula, position: tuple[int, ...], rhs: Formula, binding: dict[str, Formula]) -> Formula:
    """Apply a rule's right-hand side at a matched position."""
    return replace_at(f, position, instantiate(rhs, binding))


def strip_spans(f: Formula) -> Formula:
    """Copy of f with all spans cleared (useful for canonical snapshots)."""
    if isinstance(f, (Var, Const, MetaVar)):
        return replace(f, span=None)
    if isinstance(f, Not):
        return Not(strip_spans(f.child))
    assert isinstance(f, BinOp)
    return BinOp(f.op, strip_spans(f.left), strip_spans(f.right))
