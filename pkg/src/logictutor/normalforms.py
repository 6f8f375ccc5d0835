"""Normal-form conversion (NNF/CNF/DNF), syntactic predicates, clause extraction.

Conversion is equivalence-preserving: derived connectives are eliminated
first (with constant folding), negations are pushed to the leaves, and
CNF/DNF are produced by distribution. Distribution works on literal sets,
so duplicate literals and duplicate clauses collapse and the result is in
a canonical sorted order; converting an already-converted formula is a
fixpoint.
"""

from __future__ import annotations

from .errors import NotInCnf
from .formulas import AND, IFF, IMP, OR, XOR, BinOp, Const, Formula, Not, Var

# A literal is (variable name, positive?); a clause is a frozenset of
# literals, a clause set a frozenset of clauses. The empty clause and the
# empty clause set are distinct values (frozenset() inside vs outside).
Literal = "tuple[str, bool]"
Clause = "frozenset[tuple[str, bool]]"
ClauseSet = "frozenset[frozenset[tuple[str, bool]]]"


def _fold_not(a: Formula) -> Formula:
    if isinstance(a, Const):
        return Const(not a.value)
    return Not(a)


def _fold_and(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Const):
        return b if a.value else Const(False)
    if isinstance(b, Const):
        return a if b.value else Const(False)
    return BinOp(AND, a, b)


def _fold_or(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Const):
        return Const(True) if a.value else b
    if isinstance(b, Const):
        return Const(True) if b.value else a
    return BinOp(OR, a, b)


def _eliminate(f: Formula) -> Formula:
    """Rewrite ->, <->, xor into and/or/not, folding constants away."""
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Not):
        return _fold_not(_eliminate(f.child))
    assert isinstance(f, BinOp)
    a = _eliminate(f.left)
    b = _eliminate(f.right)
    if f.op == AND:
        return _fold_and(a, b)
    if f.op == OR:
        return _fold_or(a, b)
    if f.op == IMP:
        return _fold_or(_fold_not(a), b)
    if f.op == IFF:
        return _fold_or(_fold_and(a, b), _fold_and(_fold_not(a), _fold_not(b)))
    if f.op == XOR:
        return _fold_or(_fold_and(a, _fold_not(b)), _fold_and(_fold_not(a), b))
    raise AssertionError(f.op)


def _push_negations(f: Formula, negated: bool = False) -> Formula:
    if isinstance(f, Var):
        return Not(f) if negated else f
    if isinstance(f, Const):
        return Const(f.value != negated)
    if isinstance(f, Not):
        return _push_negations(f.child, not negated)
    assert isinstance(f, BinOp) and f.op in (AND, OR)
    op = (OR if f.op == AND else AND) if negated else f.op
    return BinOp(op, _push_negations(f.left, negated), _push_negations(f.right, negated))


def to_nnf(f: Formula) -> Formula:
    """Negation normal form: only and/or over literals (or a bare constant)."""
    return _push_negations(_eliminate(f))


def is_literal(f: Formula) -> bool:
    return isinstance(f, Var) or (isinstance(f, Not) and isinstance(f.child, Var))


def is_nnf(f: Formula) -> bool:
    if isinstance(f, (Var, Const)):
        return True
    if isinstance(f, Not):
        return isinstance(f.child, Var)
    if isinstance(f, BinOp):
        return f.op in (AND, OR) and is_nnf(f.left) and is_nnf(f.right)
    return False


def _conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, BinOp) and f.op == AND:
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _disjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, BinOp) and f.op == OR:
        return _disjuncts(f.left) + _disjuncts(f.right)
    return [f]


def is_cnf(f: Formula) -> bool:
    """Conjunction of disjunctions of literals; a bare constant counts as
    degenerate CNF, a constant inside a compound does not."""
    if isinstance(f, Const):
        return True
    return all(
        all(is_literal(lit) for lit in _disjuncts(clause)) for clause in _conjuncts(f)
    )


def is_dnf(f: Formula) -> bool:
    if isinstance(f, Const):
        return True
    return all(
        all(is_literal(lit) for lit in _conjuncts(term)) for term in _disjuncts(f)
    )


def _literal_of(f: Formula):
    if isinstance(f, Var):
        return (f.name, True)
    if isinstance(f, Not) and isinstance(f.child, Var):
        return (f.child.name, False)
    raise NotInCnf(f"not a literal: {f}")


def clauses(f: Formula) -> frozenset:
    """Clause set of a CNF formula; true -> {} and false -> {empty clause}."""
    if not is_cnf(f):
        raise NotInCnf(f"formula is not in CNF: {f}")
    if isinstance(f, Const):
        return frozenset() if f.value else frozenset([frozenset()])
    return frozenset(
        frozenset(_literal_of(lit) for lit in _disjuncts(clause))
        for clause in _conjuncts(f)
    )


def _literal_key(lit) -> tuple[str, int]:
    name, positive = lit
    return (name, 0 if positive else 1)


def clause_sort_key(clause) -> tuple:
    return (len(clause), tuple(sorted(_literal_key(lit) for lit in clause)))


def _literal_formula(lit) -> Formula:
    name, positive = lit
    return Var(name) if positive else Not(Var(name))


def _balanced(parts: "list[Formula]", op: str) -> Formula:
    # Balanced nesting keeps recursion depth logarithmic even for the
    # hundreds of clauses a distribution can produce.
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return BinOp(op, _balanced(parts[:mid], op), _balanced(parts[mid:], op))


def clause_set_formula(clause_set, inner_op: str = OR) -> Formula:
    """Rebuild a formula from a clause set in canonical sorted order."""
    outer_op = AND if inner_op == OR else OR
    if not clause_set:
        # Empty conjunction of clauses is true; empty disjunction of terms false.
        return Const(inner_op == OR)
    groups = []
    for group in sorted(clause_set, key=clause_sort_key):
        if not group:
            return Const(inner_op != OR)
        lits = [_literal_formula(lit) for lit in sorted(group, key=_literal_key)]
        groups.append(_balanced(lits, inner_op))
    return _balanced(groups, outer_op)


def _cross(left: frozenset, right: frozenset) -> frozenset:
    return frozenset(a | b for a in left for b in right)


def _nnf_clause_sets(f: Formula, for_cnf: bool) -> frozenset:
    """Clause sets of an NNF formula (clauses for CNF, cubes for DNF)."""
    if isinstance(f, Const):
        hit_empty_set = f.value if for_cnf else not f.value
        return frozenset() if hit_empty_set else frozenset([frozenset()])
    if is_literal(f):
        return frozenset([frozenset([_literal_of(f)])])
    assert isinstance(f, BinOp)
    left = _nnf_clause_sets(f.left, for_cnf)
    right = _nnf_clause_sets(f.right, for_cnf)
    merging_op = AND if for_cnf else OR
    if f.op == merging_op:
        return left | right
    return _cross(left, right)


def to_cnf(f: Formula) -> Formula:
    return clause_set_formula(_nnf_clause_sets(to_nnf(f), for_cnf=True), inner_op=OR)


def to_dnf(f: Formula) -> Formula:
    return clause_set_formula(_nnf_clause_sets(to_nnf(f), for_cnf=False), inner_op=AND)
