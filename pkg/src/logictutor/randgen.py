"""Seeded random generators for formulas and clause sets.

Used by the property-test suites and the exercise-authoring tools; all
randomness comes from a caller-supplied random.Random so runs are
reproducible.
"""

from __future__ import annotations

import random

from .formulas import BINARY_OPS, BinOp, Const, Formula, Not, Var


def random_formula(
    rng: random.Random,
    max_depth: int = 5,
    variables: tuple[str, ...] = ("A", "B", "C", "D"),
    allow_const: bool = False,
) -> Formula:
    """Random formula of depth <= max_depth over the given variables."""
    if max_depth <= 0:
        roll = rng.random()
        if allow_const and roll < 0.08:
            return Const(rng.random() < 0.5)
        return Var(rng.choice(variables))
    roll = rng.random()
    if roll < 0.22:
        return random_formula(rng, 0, variables, allow_const)
    if roll < 0.42:
        return Not(random_formula(rng, max_depth - 1, variables, allow_const))
    op = rng.choice(BINARY_OPS)
    return BinOp(
        op,
        random_formula(rng, max_depth - 1, variables, allow_const),
        random_formula(rng, max_depth - 1, variables, allow_const),
    )


def random_clause_set(
    rng: random.Random,
    variables: tuple[str, ...],
    n_clauses: int,
    max_clause_len: int = 3,
) -> frozenset:
    """Random clause set; clauses are non-empty and non-tautological.

    May return fewer than n_clauses clauses when the variable pool is too
    small to offer enough distinct ones.
    """
    out = set()
    attempts = 0
    while len(out) < n_clauses and attempts < 50 * n_clauses:
        attempts += 1
        width = rng.randint(1, max_clause_len)
        names = rng.sample(variables, min(width, len(variables)))
        out.add(frozenset((name, rng.random() < 0.5) for name in names))
    return frozenset(out)
