"""Acceptance suite: one test per shipping criterion, at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v` for one pass/fail line per
criterion; each test also prints an ACCEPTANCE line with its measurements.
"""

from __future__ import annotations

import json
import random
import time

from conftest import brute_equivalent, canonical_assignments, clause_satisfied
from test_reversion import random_forward_mutation
from test_sessions import FUZZ_KINDS, example_solution_actions, random_action

from logictutor.errors import DanglingInput, DuplicateOutput
from logictutor.exercises import load_exercise, serialize_exercise
from logictutor.eventlog import EventRecord
from logictutor.feedback import FeedbackConfig, find_reversion, generate_feedback
from logictutor.formulas import subformulas
from logictutor.normalforms import clause_set_formula, clauses, is_cnf, is_dnf, is_nnf, to_cnf, to_dnf, to_nnf
from logictutor.parser import parse
from logictutor.randgen import random_clause_set, random_formula
from logictutor.resolution import ResolutionState, auto_refute, replay_derivation
from logictutor.rules import build_catalogue
from logictutor.semantics import equivalent, evaluate, satisfiable
from logictutor.sessions import replay, start_session
from logictutor.stats import compute_stats

import pytest


def report(name: str, detail: str):
    print(f"ACCEPTANCE PASS: {name} ({detail})")


def test_end_to_end_example_one(faulty_system):
    """Loading the canonical fixture and submitting the full solution
    completes the exercise in under one second."""
    started = time.perf_counter()
    session = start_session(faulty_system, "acceptance")
    for action in example_solution_actions(session):
        result = session.dispatch(action)
        assert result.accepted
    assert session.completed
    combined = parse("(D -> B) & (B -> (D & U)) & !(B & D & U) & D")
    assert satisfiable(combined) is False
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"end-to-end run took {elapsed:.3f}s"
    report("end-to-end example", f"{elapsed * 1000:.0f} ms, session completed, combination unsatisfiable")


def test_interchange_diagnosis_reproduction():
    """Student (D & U) -> !B against solution !B -> (D & U): level-2 feedback
    is wrong-verdict, misconception-general, misconception-precise
    (interchange), highlight; the diagnosis is a length-1 sequence."""
    solution = parse("!B -> (D & U)")
    report_ = generate_feedback("(D & U) -> !B", solution, FeedbackConfig(max_level=2))
    kinds = [item.kind for item in report_.items]
    assert kinds == [
        "verdict-message",
        "misconception-general",
        "misconception-precise",
        "highlight",
    ]
    assert report_.items[1].key == "misconception.implication-swap.general"
    assert report_.items[2].key == "misconception.implication-swap.precise"
    assert report_.diagnosis is not None and report_.diagnosis.length == 1
    report("interchange diagnosis", "items in order, sequence length 1")


def test_reversion_property_suite():
    """Over >= 500 random solutions (depth <= 5, <= 4 variables) with
    k in {1,2} injected mistakes, the search reverts >= 95% within length k;
    every failure is a case where the mistakes cancelled into equivalence.
    Total runtime < 60 s."""
    rng = random.Random(96111)
    started = time.perf_counter()
    trials = 0
    successes = 0
    cancelled = 0
    non_cancelled_failures = []
    while trials < 500:
        solution = random_formula(rng, 5, ("A", "B", "C", "D"))
        solution_parts = set(subformulas(solution))
        k = 1 if trials % 2 == 0 else 2
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
        if len(hit) != k:
            continue
        trials += 1
        if equivalent(student, solution):
            # the explicit cancellation assertion the criterion demands
            assert equivalent(student, solution)
            cancelled += 1
            continue
        sequence = find_reversion(student, solution, build_catalogue(solution, student))
        if sequence is None or sequence.length > k or not equivalent(sequence.final, solution):
            non_cancelled_failures.append((student, solution, k))
        else:
            successes += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"property suite took {elapsed:.1f}s"
    assert not non_cancelled_failures, non_cancelled_failures[:3]
    rate = successes / trials
    assert rate >= 0.95, f"success rate {rate:.3f}"
    report(
        "reversion property suite",
        f"{trials} trials, {successes} reverted ({rate:.1%}), {cancelled} cancelled, {elapsed:.1f}s",
    )


def test_three_error_depth_bound():
    """A student formula with three independent mistakes yields no sequence
    at the length-2 bound; feedback falls back to a verifiable
    distinguishing assignment."""
    solution = parse("(A -> B) & (C | !D)")
    student_text = "(B -> A) | (C & D)"
    student = parse(student_text)
    catalogue = build_catalogue(solution, student)
    assert find_reversion(student, solution, catalogue, max_len=2) is None
    feedback = generate_feedback(student_text, solution, FeedbackConfig(max_level=2))
    counterexamples = [i for i in feedback.items if i.kind == "counterexample"]
    assert len(counterexamples) == 1
    witness = counterexamples[0].assignment
    assert evaluate(student, witness) != evaluate(solution, witness)
    report("three-error depth bound", "search returns none, counterexample verified")


def test_normal_form_properties():
    """>= 1000 random formulas (<= 6 variables): every conversion output
    satisfies its syntactic predicate and truth-table equivalence with the
    input; zero failures."""
    rng = random.Random(48532)
    checked = 0
    for _ in range(1000):
        f = random_formula(rng, 6, ("A", "B", "C", "D", "E", "F"), allow_const=True)
        nnf, cnf, dnf = to_nnf(f), to_cnf(f), to_dnf(f)
        assert is_nnf(nnf) and is_cnf(cnf) and is_dnf(dnf)
        assert equivalent(f, nnf) and equivalent(f, cnf) and equivalent(f, dnf)
        checked += 1
    assert checked == 1000
    report("normal-form properties", "1000 formulas, zero failures")


def test_resolution_cross_oracle():
    """>= 100 random clause sets (<= 6 variables): saturation refutes exactly
    the unsatisfiable ones, and every replayed resolvent is semantically
    sound (models of both parents are models of the resolvent)."""
    rng = random.Random(777)
    refuted = 0
    steps_checked = 0
    for trial in range(100):
        n_vars = rng.randint(2, 6)
        names = tuple("ABCDEF"[:n_vars])
        clause_set = random_clause_set(rng, names, rng.randint(2, 2 * n_vars), 3)
        formula = clause_set_formula(clause_set)
        records = auto_refute(clause_set)
        assert (records is not None) == (not satisfiable(formula))
        if records is None:
            continue
        refuted += 1
        state = ResolutionState(clause_set)
        for record in records:
            node, _, _ = state.resolve_step(record.parents[0], record.parents[1], record.pivot)
            parent1 = state.nodes[record.parents[0]].clause
            parent2 = state.nodes[record.parents[1]].clause
            for assignment in canonical_assignments(names):
                if clause_satisfied(parent1, assignment) and clause_satisfied(parent2, assignment):
                    assert clause_satisfied(node.clause, assignment)
            steps_checked += 1
        assert state.goal_reached
    assert refuted > 0
    report("resolution cross-oracle", f"100 clause sets, {refuted} refuted, {steps_checked} sound steps")


def test_pipeline_replay_determinism(faulty_system):
    """50 fuzzed action sequences replay to bit-identical snapshots and
    feedback reports."""
    identical = 0
    for seed in range(50):
        rng = random.Random(31000 + seed)
        recorded = [random_action(rng, len(faulty_system.tasks)) for _ in range(40)]
        s1, out1 = replay(faulty_system, recorded, session_id="replay")
        s2, out2 = replay(faulty_system, recorded, session_id="replay")
        snap1 = json.dumps(s1.snapshot(), sort_keys=True, ensure_ascii=False)
        snap2 = json.dumps(s2.snapshot(), sort_keys=True, ensure_ascii=False)
        assert snap1 == snap2
        assert len(out1) == len(out2)
        for a, b in zip(out1, out2):
            if hasattr(a, "report"):
                assert a.report == b.report
            else:
                assert type(a) is type(b) and str(a) == str(b)
        identical += 1
    assert identical == 50
    report("pipeline replay determinism", "50 fuzzed sequences bit-identical")


def _stat_event(seq, session, accepted, error, label="only-if"):
    return EventRecord(
        seq=seq,
        ts="2026-01-01T00:00:00+00:00",
        session=session,
        group="EG1",
        exercise="ex",
        task=1,
        statement=0,
        label=label,
        action="submit-formula",
        accepted=accepted,
        error=error,
        text="...",
    )


def test_stats_arithmetic():
    """Hand-counted synthetic logs reproduce the defined rates exactly.
    The published classroom values are not reproducible (they come from
    live students) and are out of scope; only the definitions are checked."""
    # 4 sessions attempt, 2 err, both with the same classification
    log = [
        _stat_event(0, "s1", False, "rule-diagnosed:implication-swap"),
        _stat_event(1, "s1", True, "none"),
        _stat_event(2, "s2", False, "rule-diagnosed:implication-swap"),
        _stat_event(3, "s2", True, "none"),
        _stat_event(4, "s3", True, "none"),
        _stat_event(5, "s4", True, "none"),
    ]
    row = compute_stats(log)[0]
    assert (row.attempts, row.error_rate, row.most_frequent_rate) == (4, 0.50, 0.50)

    # 3 sessions err with {swap, swap, or-to-xor}: mode rate 2/3
    log2 = [
        _stat_event(0, "s1", False, "rule-diagnosed:implication-swap"),
        _stat_event(1, "s2", False, "rule-diagnosed:implication-swap"),
        _stat_event(2, "s3", False, "rule-diagnosed:subst-or-to-xor"),
    ]
    row2 = compute_stats(log2)[0]
    assert row2.error_rate == 1.0
    assert abs(row2.most_frequent_rate - 2 / 3) < 1e-12

    # zero attempts: no 0/0 rows
    assert compute_stats([]) == []
    report("stats arithmetic", "hand-counted rates reproduced exactly")


BAD_DANGLING = """<Exercise name="bad1"><Title>B</Title>
<Task type="CreateFormulas" feedbackLevels="0">
  <Input>NOWHERE</Input>
  <Formula><Solution>A</Solution></Formula>
  <Output>F</Output>
</Task></Exercise>"""

BAD_DUPLICATE = """<Exercise name="bad2"><Title>B</Title>
<Task type="CreateFormulas" feedbackLevels="0">
  <Formula><Solution>A</Solution></Formula><Output>F</Output></Task>
<Task type="CreateFormulas" feedbackLevels="0">
  <Formula><Solution>B</Solution></Formula><Output>F</Output></Task>
</Exercise>"""


def test_xml_roundtrip_and_validation(exercise_xml):
    """load -> serialize -> load is structurally identity on all shipped
    fixtures; crafted bad files are rejected with correct element paths."""
    for name in ("faulty-software-system", "alarm-normal-forms", "implication-drill"):
        original = load_exercise(exercise_xml(name))
        assert load_exercise(serialize_exercise(original)) == original
    with pytest.raises(DanglingInput) as dangling:
        load_exercise(BAD_DANGLING)
    assert dangling.value.path == "Exercise/Task[1]/Input[1]"
    with pytest.raises(DuplicateOutput) as duplicate:
        load_exercise(BAD_DUPLICATE)
    assert duplicate.value.path == "Exercise/Task[2]/Output[1]"
    report("xml round-trip", "3 fixtures identical after round-trip, bad files rejected with paths")
