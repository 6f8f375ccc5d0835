from __future__ import annotations

import itertools
from importlib import resources

import pytest

from logictutor.parser import parse
from logictutor.semantics import evaluate, variables


def canonical_assignments(names):
    """Ascending-binary-counter enumeration; variable i carries bit i."""
    for row in range(1 << len(names)):
        yield {name: bool((row >> i) & 1) for i, name in enumerate(names)}


def union_order(f, g):
    seen = dict.fromkeys(variables(f))
    for name in variables(g):
        seen.setdefault(name)
    return tuple(seen)


def brute_equivalent(f, g) -> bool:
    """Truth-table oracle by direct evaluation, independent of the bitmask path."""
    order = union_order(f, g)
    return all(
        evaluate(f, a) == evaluate(g, a) for a in canonical_assignments(order)
    )


def brute_distinguishing(f, g):
    order = union_order(f, g)
    for assignment in canonical_assignments(order):
        if evaluate(f, assignment) != evaluate(g, assignment):
            return assignment
    return None


def brute_satisfiable(f) -> bool:
    order = variables(f)
    return any(evaluate(f, a) for a in canonical_assignments(order))


def clause_satisfied(clause, assignment) -> bool:
    return any(assignment[name] == positive for name, positive in clause)


@pytest.fixture
def exercise_xml():
    def load(name: str) -> str:
        return (
            resources.files("logictutor")
            .joinpath(f"data/exercises/{name}.xml")
            .read_text(encoding="utf-8")
        )

    return load


@pytest.fixture
def faulty_system(exercise_xml):
    from logictutor.exercises import load_exercise

    return load_exercise(exercise_xml("faulty-software-system"))


def p(text: str):
    return parse(text)
