from __future__ import annotations

import random

import pytest

from conftest import brute_equivalent
from logictutor.errors import InvalidMatch
from logictutor.feedback import apply_rule, find_reversion
from logictutor.formulas import BINARY_OPS, BinOp, Not, subformulas
from logictutor.parser import parse
from logictutor.patterns import match_all, positions, replace_at, rewrite, subformula_at
from logictutor.randgen import random_formula
from logictutor.render import render
from logictutor.rules import base_catalogue, build_catalogue, completion_rules
from logictutor.semantics import equivalent


def rule(rule_id: str):
    for r in base_catalogue():
        if r.id == rule_id:
            return r
    raise KeyError(rule_id)


def brute_reachable(student, catalogue, max_len):
    """Independent oracle: all formulas reachable by <= max_len rule
    applications, via plain nested enumeration (no search machinery)."""
    current = {student}
    reached = set(current)
    for _ in range(max_len):
        new = set()
        for f in current:
            for r in catalogue:
                for m in match_all(r.lhs, f):
                    new.add(rewrite(f, m.position, r.rhs, m.binding))
        current = new - reached
        reached |= new
    reached.discard(student)
    return reached


def test_catalogue_composition():
    cat = base_catalogue()
    ids = [r.id for r in cat]
    assert ids[0] == "implication-swap"
    # 20 ordered substitution pairs over 5 binary connectives
    assert sum(1 for i in ids if i.startswith("subst-")) == len(BINARY_OPS) * (len(BINARY_OPS) - 1)
    assert ids[-2:] == ["negation-superfluous", "negation-missing"]


def test_apply_rule_swap():
    f = parse("(D & U) -> !B")
    swap = rule("implication-swap")
    match = match_all(swap.lhs, f)[0]
    out = apply_rule(swap, f, match)
    assert out == parse("!B -> (D & U)")


def test_apply_rule_or_to_and():
    f = parse("A | B")
    r = rule("subst-or-to-and")
    out = apply_rule(r, f, match_all(r.lhs, f)[0])
    assert out == parse("A & B")


def test_swap_is_involution():
    f = parse("(D & U) -> !B")
    swap = rule("implication-swap")
    once = apply_rule(swap, f, match_all(swap.lhs, f)[0])
    twice = apply_rule(swap, once, match_all(swap.lhs, once)[0])
    assert twice == f


def test_apply_rule_rejects_stale_match():
    f = parse("(A -> B) & C")
    swap = rule("implication-swap")
    match = match_all(swap.lhs, f)[0]
    with pytest.raises(InvalidMatch):
        apply_rule(swap, parse("(A & B) & C"), match)


def test_completion_rules_cover_missing_subformulas():
    solution = parse("A & (B | C)")
    student = parse("A")
    ids = [r.id for r in completion_rules(solution, student)]
    assert "completion-and:B | C" in ids
    assert "completion-or:B | C" in ids
    # A occurs in the student formula, so no completion rule for it
    assert not any(i.endswith(":A") for i in ids)


def test_find_reversion_swap_length_one():
    student, solution = parse("(D & U) -> !B"), parse("!B -> (D & U)")
    seq = find_reversion(student, solution, build_catalogue(solution, student))
    assert seq is not None and seq.length == 1
    assert seq.steps[0].rule.id == "implication-swap"
    assert seq.steps[0].match.position == ()
    assert equivalent(seq.final, solution)


def test_find_reversion_or_to_xor():
    student, solution = parse("A | B"), parse("A xor B")
    seq = find_reversion(student, solution, build_catalogue(solution, student))
    assert seq is not None and seq.length == 1
    assert seq.steps[0].rule.id == "subst-or-to-xor"
    # oracle for the rewritten formula: direct truth-table comparison
    assert brute_equivalent(seq.final, solution)


def test_find_reversion_missing_part():
    student, solution = parse("D"), parse("D & B")
    seq = find_reversion(student, solution, build_catalogue(solution, student))
    assert seq is not None and seq.length == 1
    assert seq.steps[0].rule.category == "completion"
    assert equivalent(seq.final, solution)


def test_find_reversion_two_mistakes():
    solution = parse("(A -> B) & C")
    student = parse("(B -> A) | C")  # swapped implication, & became |
    seq = find_reversion(student, solution, build_catalogue(solution, student))
    assert seq is not None and seq.length == 2
    assert equivalent(seq.final, solution)


def test_find_reversion_three_errors_exceeds_bound():
    solution = parse("(A -> B) & (C | !D)")
    student = parse("(B -> A) | (C & D)")  # three independent mistakes
    catalogue = build_catalogue(solution, student)
    # independent oracle first: no reachable formula within 2 steps is equivalent
    assert not equivalent(student, solution)
    reachable = brute_reachable(student, catalogue, 2)
    assert all(not equivalent(g, solution) for g in reachable)
    assert find_reversion(student, solution, catalogue, max_len=2) is None


def test_find_reversion_deterministic_tie_breaking():
    # two same-length diagnoses exist; catalogue order picks implication-swap
    student, solution = parse("A -> A"), parse("A")
    seq = find_reversion(student, solution, build_catalogue(solution, student))
    first_matching = None
    for r in build_catalogue(solution, student):
        for m in match_all(r.lhs, student):
            candidate = rewrite(student, m.position, r.rhs, m.binding)
            if equivalent(candidate, solution):
                first_matching = (r.id, m.position)
                break
        if first_matching:
            break
    assert seq.length == 1
    assert (seq.steps[0].rule.id, seq.steps[0].match.position) == first_matching


def test_find_reversion_cap_aborts_to_none():
    solution = parse("(A -> B) & (C | !D)")
    student = parse("(B -> A) | (C & D)")
    catalogue = build_catalogue(solution, student)
    assert find_reversion(student, solution, catalogue, max_len=2, cap=10) is None


def _disjoint(p1, p2) -> bool:
    return p1[: len(p2)] != p2 and p2[: len(p1)] != p1


def random_forward_mutation(rng, f, solution_parts, avoid=(), must_differ_from=(), attempts: int = 8):
    """Inverse of a catalogue rule, injected as a student mistake.

    Mutations that do not change the formula's meaning are not mistakes and
    are redrawn, as are mutations inside an `avoid` subtree (a second
    mistake lands somewhere else, it does not edit the first one) and
    mutations that land back on a formula in `must_differ_from` (a student
    whose mistakes cancel has a right answer, not k mistakes). Returns
    (mutated formula, position) or None.
    """
    for _ in range(attempts):
        result = _mutate_once(rng, f, solution_parts)
        if result is None:
            continue
        mutated, pos = result
        if not all(_disjoint(pos, other) for other in avoid):
            continue
        if equivalent(mutated, f):
            continue
        if any(equivalent(mutated, g) for g in must_differ_from):
            continue
        return mutated, pos
    return None


def _mutate_once(rng, f, solution_parts):
    kind = rng.choice(("swap", "subst", "negate", "drop-negation", "drop-part"))
    all_positions = [p for p, _ in positions(f)]
    if kind == "swap":
        spots = [p for p, n in positions(f) if isinstance(n, BinOp) and n.op == "imp"]
        if not spots:
            return None
        pos = rng.choice(spots)
        node = subformula_at(f, pos)
        return replace_at(f, pos, BinOp("imp", node.right, node.left)), pos
    if kind == "subst":
        spots = [p for p, n in positions(f) if isinstance(n, BinOp)]
        if not spots:
            return None
        pos = rng.choice(spots)
        node = subformula_at(f, pos)
        other = rng.choice([op for op in BINARY_OPS if op != node.op])
        return replace_at(f, pos, BinOp(other, node.left, node.right)), pos
    if kind == "negate":
        pos = rng.choice(all_positions)
        return replace_at(f, pos, Not(subformula_at(f, pos))), pos
    if kind == "drop-negation":
        spots = [p for p, n in positions(f) if isinstance(n, Not)]
        if not spots:
            return None
        pos = rng.choice(spots)
        return replace_at(f, pos, subformula_at(f, pos).child), pos
    # drop-part: remove one conjunct/disjunct, the inverse of a completion rule;
    # only drop parts that do not occur elsewhere, so completion can re-offer them
    spots = []
    for p, n in positions(f):
        if isinstance(n, BinOp) and n.op in ("and", "or"):
            spots.append((p, n))
    rng.shuffle(spots)
    for pos, node in spots:
        kept, dropped = node.left, node.right
        without = replace_at(f, pos, kept)
        if dropped not in set(subformulas(without)) and dropped in solution_parts:
            return without, pos
    return None


def test_forward_backward_consistency():
    rng = random.Random(1312)
    trials = 0
    cancelled = 0
    failures = []
    while trials < 200:
        solution = random_formula(rng, 4, ("A", "B", "C", "D"))
        solution_parts = set(subformulas(solution))
        k = rng.choice((1, 2))
        student = solution
        hit = []
        for _ in range(k):
            mutated = random_forward_mutation(
                rng, student, solution_parts, avoid=hit, must_differ_from=(solution,)
            )
            if mutated is None:
                break
            student, pos = mutated
            hit.append(pos)
        else:
            trials += 1
            if equivalent(student, solution):
                cancelled += 1
                continue
            seq = find_reversion(student, solution, build_catalogue(solution, student), max_len=k)
            if seq is None:
                failures.append((render(student), render(solution), k))
            else:
                assert seq.length <= k
                assert equivalent(seq.final, solution)
    assert not failures, failures
    assert cancelled < trials  # the suite exercises real mistakes
