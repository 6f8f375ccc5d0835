from __future__ import annotations

import pytest

from logictutor.errors import DanglingInput, DuplicateOutput, SchemaError
from logictutor.exercises import (
    Exercise,
    latex_to_ascii,
    load_exercise,
    serialize_exercise,
)
from logictutor.parser import parse


MINIMAL = """<?xml version="1.0" encoding="UTF-8"?>
<Exercise name="mini">
  <Title>Mini</Title>
  <Description><p>Short.</p></Description>
  <Task type="CreateFormulas" feedbackLevels="0,1">
    <Title>Model</Title>
    <Formula><Description>Always.</Description><Solution>A -> B</Solution></Formula>
    <Output>OUT</Output>
  </Task>
</Exercise>
"""


def test_fig_style_fixture_loads(faulty_system):
    ex = faulty_system
    assert ex.name == "faulty-software-system"
    assert [t.type for t in ex.tasks] == [
        "PickVariables",
        "CreateFormulas",
        "CreateFormulas",
        "InferenceFormula",
        "ManualTransformation",
        "Resolution",
    ]
    assert [t.output for t in ex.tasks] == [
        "VARIABLES",
        "FORMULAE",
        "CONCLUSIONFORMULA",
        "COMPLETEFORMULA",
        "CNF_FORMULA",
        None,
    ]
    # legacy alias transformToCnf provides the cnf target
    assert ex.tasks[4].target_kind == "cnf"
    # solutions parsed under the ASCII grammar
    assert ex.tasks[1].statements[0].solution == parse("D -> B")
    assert ex.tasks[1].statements[2].solution == parse("!(B & D & U)")
    assert ex.tasks[1].meanings == (
        ("U", "the user interface"),
        ("B", "the back end"),
        ("D", "the database"),
    )


def test_feedback_levels_parsed(faulty_system):
    assert faulty_system.tasks[0].feedback_levels == frozenset({0})
    assert faulty_system.tasks[1].feedback_levels == frozenset({0, 1, 2})


def test_assimilation_generator_warns(faulty_system):
    assert any("assimilationGenerator" in w for w in faulty_system.warnings)


def test_unknown_attribute_warns():
    xml = MINIMAL.replace('feedbackLevels="0,1"', 'feedbackLevels="0,1" answerChecker="x"')
    ex = load_exercise(xml)
    assert any("answerChecker" in w for w in ex.warnings)


def test_unknown_task_type_is_error():
    xml = MINIMAL.replace('type="CreateFormulas"', 'type="KripkeGame"')
    with pytest.raises(SchemaError) as err:
        load_exercise(xml)
    assert "KripkeGame" in str(err.value)


def test_dangling_input_with_path():
    xml = MINIMAL.replace("<Title>Model</Title>", "<Title>Model</Title><Input>NOPE</Input>")
    with pytest.raises(DanglingInput) as err:
        load_exercise(xml)
    assert err.value.path == "Exercise/Task[1]/Input[1]"
    assert err.value.name == "NOPE"


def test_duplicate_output_with_path():
    extra = (
        '<Task type="CreateFormulas" feedbackLevels="0">'
        "<Formula><Solution>A</Solution></Formula><Output>OUT</Output></Task>"
    )
    xml = MINIMAL.replace("</Exercise>", extra + "</Exercise>")
    with pytest.raises(DuplicateOutput) as err:
        load_exercise(xml)
    assert err.value.path == "Exercise/Task[2]/Output[1]"


def test_first_task_with_input_rejected_at_load():
    xml = MINIMAL.replace("<Title>Model</Title>", "<Title>Model</Title><Input>VARIABLES</Input>")
    with pytest.raises(DanglingInput):
        load_exercise(xml)


def test_unparsable_solution_is_schema_error():
    xml = MINIMAL.replace("A -> B", "A -> ")
    with pytest.raises(SchemaError) as err:
        load_exercise(xml)
    assert "Solution" in err.value.path


def test_type_alias_create_formula_singular():
    xml = MINIMAL.replace('type="CreateFormulas"', 'type="CreateFormula"')
    assert load_exercise(xml).tasks[0].type == "CreateFormulas"


def test_malformed_xml_is_schema_error():
    with pytest.raises(SchemaError):
        load_exercise("<Exercise name='x'><Title>oops</Exercise>")


def test_transformation_requires_target():
    xml = """<Exercise name="t"><Title>T</Title>
    <Task type="CreateFormulas" feedbackLevels="0">
      <Formula><Solution>A</Solution></Formula><Output>F</Output></Task>
    <Task type="ManualTransformation" feedbackLevels="0"><Input>F</Input></Task>
    </Exercise>"""
    with pytest.raises(SchemaError) as err:
        load_exercise(xml)
    assert "Target" in str(err.value)


def test_multi_statement_output_cannot_feed_transformation():
    xml = """<Exercise name="t"><Title>T</Title>
    <Task type="CreateFormulas" feedbackLevels="0">
      <Formula><Solution>A</Solution></Formula>
      <Formula><Solution>B</Solution></Formula>
      <Output>F</Output></Task>
    <Task type="ManualTransformation" feedbackLevels="0">
      <Input>F</Input><Target kind="cnf"/></Task>
    </Exercise>"""
    with pytest.raises(SchemaError) as err:
        load_exercise(xml)
    assert "single formula" in str(err.value)


def test_admin_tasks_bind_no_outputs():
    xml = """<Exercise name="t"><Title>T</Title>
    <Task type="Message" feedbackLevels="0"><Output>M</Output></Task>
    </Exercise>"""
    with pytest.raises(SchemaError):
        load_exercise(xml)


@pytest.mark.parametrize(
    "name", ["faulty-software-system", "alarm-normal-forms", "implication-drill"]
)
def test_roundtrip_all_shipped_fixtures(name, exercise_xml):
    original = load_exercise(exercise_xml(name))
    serialized = serialize_exercise(original)
    reloaded = load_exercise(serialized)
    assert reloaded == original
    # serialization is a fixpoint
    assert serialize_exercise(reloaded) == serialized


def test_statement_kind_survives_roundtrip(faulty_system):
    reloaded = load_exercise(serialize_exercise(faulty_system))
    assert reloaded.tasks[1].statements[1].kind == "only-if"


def test_description_rich_text_preserved(faulty_system):
    assert faulty_system.description.startswith("<p>")
    reloaded = load_exercise(serialize_exercise(faulty_system))
    assert reloaded.description == faulty_system.description


def test_description_sanitized():
    xml = MINIMAL.replace(
        "<p>Short.</p>", '<p onclick="steal()">Short.</p><script>evil()</script>'
    )
    ex = load_exercise(xml)
    assert "script" not in ex.description
    assert "onclick" not in ex.description


def test_latex_conversion():
    assert latex_to_ascii(r"$D \rightarrow B$") == "D -> B"
    assert latex_to_ascii(r"$B \rightarrow (D \wedge U)$") == "B -> (D & U)"
    assert parse(latex_to_ascii(r"$\neg (B \wedge D \wedge U)$")) == parse("!(B & D & U)")
