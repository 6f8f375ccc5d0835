"""Recursive-descent parser for propositional formulas.

Grammar (loosest binding first):

    iff   := imp ( '<->' imp )*          left-associative
    imp   := xor ( '->' imp )?           right-associative
    xor   := or  ( 'xor' or )*
    or    := and ( '|' and )*
    and   := unary ( '&' unary )*
    unary := '!' unary | atom
    atom  := IDENT | 'true' | 'false' | '(' iff ')'

ASCII connectives are canonical; the unicode aliases ¬ ∧ ∨ → ↔ ⊕ are
accepted on input. Identifiers match [A-Za-z][A-Za-z0-9_]*; `true`,
`false` and `xor` are reserved words. Every node carries the character
span it was parsed from (a parenthesised group extends the inner node's
span to include the parentheses).

Undeclared variables are not rejected here; variable policing is a
feedback concern, not a parsing one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import FormulaSyntaxError
from .formulas import AND, IFF, IMP, OR, XOR, BinOp, Const, Formula, MetaVar, Not, Var

_UNICODE_ALIASES = {
    "¬": "!",
    "∧": "&",
    "∨": "|",
    "→": "->",
    "↔": "<->",
    "⊕": "xor",
}

_KEYWORDS = {"true", "false", "xor"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'const' | 'metavar' | operator/paren text
    text: str
    start: int
    end: int


def tokenize(text: str, allow_metavars: bool = False) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _UNICODE_ALIASES:
            tokens.append(Token(_UNICODE_ALIASES[ch], ch, i, i + 1))
            i += 1
            continue
        if ch in "!&|()":
            tokens.append(Token(ch, ch, i, i + 1))
            i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(Token("<->", "<->", i, i + 3))
            i += 3
            continue
        if text.startswith("->", i):
            tokens.append(Token("->", "->", i, i + 2))
            i += 2
            continue
        if ch == "$" and allow_metavars:
            j = i + 1
            if j >= n or not text[j].isalpha():
                raise FormulaSyntaxError(i, "metavariable name expected after '$'")
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("metavar", text[i + 1 : j], i, j))
            i = j
            continue
        if ch.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word == "xor":
                tokens.append(Token("xor", word, i, j))
            elif word in ("true", "false"):
                tokens.append(Token("const", word, i, j))
            else:
                tokens.append(Token("ident", word, i, j))
            i = j
            continue
        raise FormulaSyntaxError(i, f"unexpected character {ch!r}")
    return tokens


class _Parser:
    def __init__(self, text: str, tokens: list[Token]):
        self.text = text
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail_here(self, expectation: str):
        tok = self.peek()
        offset = tok.start if tok is not None else len(self.text)
        raise FormulaSyntaxError(offset, expectation)

    def parse_iff(self) -> Formula:
        node = self.parse_imp()
        while (tok := self.peek()) is not None and tok.kind == "<->":
            self.advance()
            rhs = self.parse_imp()
            node = BinOp(IFF, node, rhs, span=(node.span[0], rhs.span[1]))
        return node

    def parse_imp(self) -> Formula:
        node = self.parse_xor()
        if (tok := self.peek()) is not None and tok.kind == "->":
            self.advance()
            rhs = self.parse_imp()
            node = BinOp(IMP, node, rhs, span=(node.span[0], rhs.span[1]))
        return node

    def parse_xor(self) -> Formula:
        node = self.parse_or()
        while (tok := self.peek()) is not None and tok.kind == "xor":
            self.advance()
            rhs = self.parse_or()
            node = BinOp(XOR, node, rhs, span=(node.span[0], rhs.span[1]))
        return node

    def parse_or(self) -> Formula:
        node = self.parse_and()
        while (tok := self.peek()) is not None and tok.kind == "|":
            self.advance()
            rhs = self.parse_and()
            node = BinOp(OR, node, rhs, span=(node.span[0], rhs.span[1]))
        return node

    def parse_and(self) -> Formula:
        node = self.parse_unary()
        while (tok := self.peek()) is not None and tok.kind == "&":
            self.advance()
            rhs = self.parse_unary()
            node = BinOp(AND, node, rhs, span=(node.span[0], rhs.span[1]))
        return node

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok is not None and tok.kind == "!":
            self.advance()
            child = self.parse_unary()
            return Not(child, span=(tok.start, child.span[1]))
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError(len(self.text), "unexpected end of input, formula expected")
        if tok.kind == "ident":
            self.advance()
            return Var(tok.text, span=(tok.start, tok.end))
        if tok.kind == "const":
            self.advance()
            return Const(tok.text == "true", span=(tok.start, tok.end))
        if tok.kind == "metavar":
            self.advance()
            return MetaVar(tok.text, span=(tok.start, tok.end))
        if tok.kind == "(":
            lp = self.advance()
            inner = self.parse_iff()
            closing = self.peek()
            if closing is None or closing.kind != ")":
                raise FormulaSyntaxError(
                    closing.start if closing is not None else len(self.text),
                    "unbalanced parenthesis, ')' expected",
                )
            rp = self.advance()
            return replace(inner, span=(lp.start, rp.end))
        if tok.kind == ")":
            raise FormulaSyntaxError(tok.start, "unbalanced parenthesis, no matching '('")
        raise FormulaSyntaxError(tok.start, f"formula expected before {tok.text!r}")


def _parse(text: str, allow_metavars: bool) -> Formula:
    tokens = tokenize(text, allow_metavars=allow_metavars)
    if not tokens:
        raise FormulaSyntaxError(0, "empty input")
    parser = _Parser(text, tokens)
    node = parser.parse_iff()
    leftover = parser.peek()
    if leftover is not None:
        raise FormulaSyntaxError(leftover.start, f"unexpected {leftover.text!r} after a complete formula")
    return node


def parse(text: str) -> Formula:
    """Parse formula text into a tree whose spans index into `text`."""
    return _parse(text, allow_metavars=False)


def parse_pattern(text: str) -> Formula:
    """Like parse(), but additionally accepts $X metavariable leaves."""
    return _parse(text, allow_metavars=True)
