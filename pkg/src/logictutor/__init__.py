"""logictutor: an interactive propositional-logic teaching engine.

Students work through exercise pipelines (variable selection, modelling
statements as formulas, building an inference formula, normal-form
transformation, resolution) and get graded, misconception-aware feedback.
"""

from .errors import (
    FormulaSyntaxError,
    LogicTutorError,
    NotInCnf,
    TooManyVariables,
    UndeclaredVariable,
)
from .feedback import (
    FeedbackConfig,
    FeedbackItem,
    FeedbackReport,
    ReversionSequence,
    apply_rule,
    check_variables,
    find_reversion,
    generate_feedback,
)
from .formulas import BinOp, Const, Formula, MetaVar, Not, Var
from .normalforms import clauses, is_cnf, is_dnf, is_nnf, to_cnf, to_dnf, to_nnf
from .parser import parse, parse_pattern
from .patterns import Match, match_all
from .render import render
from .resolution import ResolutionState, auto_refute, init_resolution
from .rules import ReversionRule, base_catalogue, build_catalogue
from .semantics import (
    distinguishing_assignment,
    equivalent,
    evaluate,
    satisfiable,
    undeclared_variables,
    variables,
)
from .sessions import Action, ActionResult, Session, replay, start_session
from .exercises import Exercise, TaskSpec, load_exercise, load_exercise_file, serialize_exercise

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ActionResult",
    "BinOp",
    "Const",
    "Exercise",
    "FeedbackConfig",
    "FeedbackItem",
    "FeedbackReport",
    "Formula",
    "FormulaSyntaxError",
    "LogicTutorError",
    "Match",
    "MetaVar",
    "Not",
    "NotInCnf",
    "ResolutionState",
    "ReversionRule",
    "ReversionSequence",
    "Session",
    "TaskSpec",
    "TooManyVariables",
    "UndeclaredVariable",
    "Var",
    "apply_rule",
    "auto_refute",
    "base_catalogue",
    "build_catalogue",
    "check_variables",
    "clauses",
    "distinguishing_assignment",
    "equivalent",
    "evaluate",
    "find_reversion",
    "generate_feedback",
    "init_resolution",
    "is_cnf",
    "is_dnf",
    "is_nnf",
    "load_exercise",
    "load_exercise_file",
    "match_all",
    "parse",
    "parse_pattern",
    "render",
    "replay",
    "satisfiable",
    "serialize_exercise",
    "start_session",
    "to_cnf",
    "to_dnf",
    "to_nnf",
    "undeclared_variables",
    "variables",
]
