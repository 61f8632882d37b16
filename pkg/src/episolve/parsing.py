from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NoReturn

from episolve.errors import FormulaSyntaxError
from episolve.formula import (
    And,
    Atom,
    Box,
    Common,
    Everybody,
    Formula,
    Knows,
    Not,
    Top,
    disj,
    falsum,
    group,
    implies,
)
from episolve.types import RESERVED_NAMES

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<ident>[A-Za-z_][A-Za-z0-9_.']*)|(?P<sym>[!~¬&|(){}\[\],]))"
)
_KEYWORDS = RESERVED_NAMES


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    position = 0
    while position < len(text):
        if text[position].isspace():
            position += 1
            continue
        match = _TOKEN_RE.match(text, position)
        if match is None or match.end() == position:
            raise FormulaSyntaxError(f"Unexpected character {text[position]!r}", position=position)
        kind = match.lastgroup or "sym"
        value = match.group(kind)
        start = match.start(kind)
        if kind == "ident" and value in _KEYWORDS:
            kind = "keyword"
        tokens.append(_Token(kind, value, start))
        position = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self._tokens = _tokenize(text)
        self._index = 0

    @property
    def _current(self) -> _Token:
        return self._tokens[self._index]

    def _advance(self) -> _Token:
        token = self._current
        self._index += 1
        return token

    def _accept(self, text: str) -> bool:
        if self._current.kind != "ident" and self._current.text == text:
            self._index += 1
            return True
        return False

    def _expect(self, text: str) -> None:
        if not self._accept(text):
            self._fail(f"Expected {text!r}")

    def _fail(self, message: str) -> NoReturn:
        token = self._current
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise FormulaSyntaxError(f"{message}, found {found}", position=token.position)

    def _identifier(self, what: str) -> str:
        if self._current.kind != "ident":
            self._fail(f"Expected {what}")
        return self._advance().text

    def parse(self) -> Formula:
        formula = self._implication()
        if self._current.kind != "end":
            self._fail("Unexpected trailing input")
        return formula

    def _implication(self) -> Formula:
        left = self._disjunction()
        if self._accept("->"):
            return implies(left, self._implication())
        return left

    def _disjunction(self) -> Formula:
        left = self._conjunction()
        while self._accept("|"):
            left = disj(left, self._conjunction())
        return left

    def _conjunction(self) -> Formula:
        left = self._unary()
        while self._accept("&"):
            left = And(left, self._unary())
        return left

    def _group(self) -> tuple[str, ...]:
        self._expect("{")
        members = [self._identifier("agent name")]
        while self._accept(","):
            members.append(self._identifier("agent name"))
        self._expect("}")
        return group(members)

    def _unary(self) -> Formula:
        token = self._current
        if token.text in {"!", "~", "¬"} and token.kind == "sym":
            self._advance()
            return Not(self._unary())
        if token.kind == "keyword" and token.text == "K":
            self._advance()
            agent = self._identifier("agent name after K")
            return Knows(agent, self._unary())
        if token.kind == "keyword" and token.text in {"E", "C"}:
            self._advance()
            members = self._group()
            body = self._unary()
            return Everybody(members, body) if token.text == "E" else Common(members, body)
        if self._accept("["):
            action = self._identifier("action name")
            self._expect("]")
            return Box(action, self._unary())
        return self._primary()

    def _primary(self) -> Formula:
        token = self._current
        if token.kind == "keyword" and token.text == "true":
            self._advance()
            return Top()
        if token.kind == "keyword" and token.text == "false":
            self._advance()
            return falsum()
        if token.kind == "ident":
            self._advance()
            return Atom(token.text)
        if self._accept("("):
            inner = self._implication()
            self._expect(")")
            return inner
        self._fail("Expected a formula")


def parse_formula(text: str) -> Formula:
    """Parse ``p``, ``!f``, ``f & g``, ``f | g``, ``f -> g``, ``K a f``,
    ``E {a,b} f``, ``C {a,b} f``, ``[act] f``, ``true`` and ``false``.

    Prefix operators bind tighter than ``&``; ``->`` is right associative.
    """
    if not text.strip():
        raise FormulaSyntaxError("Empty formula", position=0)
    return _Parser(text).parse()
