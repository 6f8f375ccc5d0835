from __future__ import annotations

import pytest

from logictutor.errors import InvalidMatch
from logictutor.parser import parse, parse_pattern
from logictutor.patterns import (
    instantiate,
    match_all,
    match_at,
    positions,
    replace_at,
    rewrite,
    subformula_at,
)
from logictutor.render import render


def test_match_at_root():
    pattern = parse_pattern("$X -> $Y")
    f = parse("(D & U) -> !B")
    binding = match_at(pattern, f)
    assert binding is not None
    assert render(binding["X"]) == "D & U"
    assert render(binding["Y"]) == "!B"


def test_match_all_single_root_match():
    matches = match_all(parse_pattern("$X -> $Y"), parse("(D & U) -> !B"))
    assert len(matches) == 1
    assert matches[0].position == ()
    assert matches[0].span == (0, 13)


def test_match_all_no_match():
    assert match_all(parse_pattern("$X -> $Y"), parse("A & B")) == []


def test_repeated_metavariable_requires_equality():
    pattern = parse_pattern("$X & $X")
    hit = match_all(pattern, parse("(A|B) & (A|B)"))
    assert len(hit) == 1
    assert render(hit[0].binding["X"]) == "A | B"
    assert match_all(pattern, parse("(A|B) & (A|C)")) == []


def test_match_all_preorder_outermost_first():
    pattern = parse_pattern("$X -> $Y")
    f = parse("(A -> B) -> (C -> D)")
    spots = [m.position for m in match_all(pattern, f)]
    assert spots == [(), (0,), (1,)]


def test_positions_preorder():
    f = parse("!A & B")
    assert [p for p, _ in positions(f)] == [(), (0,), (0, 0), (1,)]


def test_subformula_and_replace():
    f = parse("(A | B) & C")
    assert render(subformula_at(f, (0,))) == "A | B"
    g = replace_at(f, (0,), parse("X"))
    assert render(g) == "X & C"
    # untouched parts still share structure
    assert subformula_at(g, (1,)) is subformula_at(f, (1,))


def test_replace_bad_position():
    with pytest.raises(InvalidMatch):
        replace_at(parse("A"), (0,), parse("B"))


def test_instantiate_unbound_metavar():
    with pytest.raises(InvalidMatch):
        instantiate(parse_pattern("$Z"), {})


def test_rewrite_swaps_implication():
    f = parse("(D & U) -> !B")
    match = match_all(parse_pattern("$X -> $Y"), f)[0]
    out = rewrite(f, match.position, parse_pattern("$Y -> $X"), match.binding)
    assert out == parse("!B -> (D & U)")
    assert out.span is None  # rewritten node is synthetic


def test_match_span_falls_back_to_enclosing_ancestor():
    f = parse("A & B")
    match = match_all(parse_pattern("$X & $Y"), f)[0]
    synthetic = rewrite(f, match.position, parse_pattern("$X | $Y"), match.binding)
    hits = match_all(parse_pattern("$X | $Y"), synthetic)
    # the whole tree is synthetic now; no span is available anywhere
    assert hits[0].span is None

    g = parse("(A & B) | C")
    inner = match_all(parse_pattern("$X & $Y"), g)[0]
    out = rewrite(g, inner.position, parse_pattern("$X | $Y"), inner.binding)
    again = match_all(parse_pattern("A | $Y"), out)
    # the rewritten node lost its span; its match reports the enclosing formula's
    assert again[0].position == (0,)
    assert again[0].span == (0, 11)
