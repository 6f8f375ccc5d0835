"""Exception types shared across the engine."""

from __future__ import annotations


class LogicTutorError(Exception):
    """Base class for all engine errors."""


class FormulaSyntaxError(LogicTutorError):
    """Raised when formula text cannot be parsed.

    Carries the character offset of the problem and a short expectation
    message ("empty input", "unbalanced parenthesis", ...).
    """

    def __init__(self, offset: int, expectation: str):
        super().__init__(f"{expectation} (at offset {offset})")
        self.offset = offset
        self.expectation = expectation


class UndeclaredVariable(LogicTutorError):
    def __init__(self, name: str):
        super().__init__(f"variable {name!r} is not declared")
        self.name = name


class TooManyVariables(LogicTutorError):
    def __init__(self, count: int, limit: int):
        super().__init__(f"{count} variables exceed the exhaustive-check limit of {limit}")
        self.count = count
        self.limit = limit


class NotInCnf(LogicTutorError):
    pass


class InvalidMatch(LogicTutorError):
    pass


class RuleNotApplicable(LogicTutorError):
    def __init__(self, rule_id: str, position: tuple[int, ...]):
        super().__init__(f"rule {rule_id!r} does not apply at position {list(position)}")
        self.rule_id = rule_id
        self.position = position


class ResolutionError(LogicTutorError):
    pass


class NotResolvable(ResolutionError):
    pass


class AmbiguousPivot(ResolutionError):
    """The clause pair has several complementary pairs; the pivot must be named."""

    def __init__(self, candidates: tuple[str, ...]):
        super().__init__(f"pivot is ambiguous, candidates: {', '.join(candidates)}")
        self.candidates = candidates


class UnknownClause(ResolutionError):
    def __init__(self, clause_id: int):
        super().__init__(f"no clause with id {clause_id}")
        self.clause_id = clause_id


class CapExceeded(LogicTutorError):
    pass


class SchemaError(LogicTutorError):
    """Exercise file violates the schema. Carries an element path like
    ``Exercise/Task[2]/Formula[1]/Solution``."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


class DanglingInput(SchemaError):
    def __init__(self, path: str, name: str):
        super().__init__(path, f"input {name!r} does not match any earlier output")
        self.name = name


class DuplicateOutput(SchemaError):
    def __init__(self, path: str, name: str):
        super().__init__(path, f"output name {name!r} is already used by an earlier task")
        self.name = name


class SessionNotFound(LogicTutorError):
    pass


class TaskNotActive(LogicTutorError):
    pass


class MalformedAction(LogicTutorError):
    pass


class UnknownOption(LogicTutorError):
    def __init__(self, name: str):
        super().__init__(f"variable {name!r} is not among the offered options")
        self.name = name


class MalformedLog(LogicTutorError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number
