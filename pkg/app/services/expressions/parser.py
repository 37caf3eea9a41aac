"""
Tokenizer and precedence-climbing parser for operator expressions.

Precedence, tightest first: indexing, ^ (integer literal exponent),
unary minus, * and /, + and -. Binary operators associate to the left.
Every error carries the byte offset of the offending token.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from app.core.exceptions import ExpressionSyntaxError
from app.services.expressions.ast_nodes import (
    Atom,
    Binary,
    Call,
    Imaginary,
    Index,
    Node,
    Number,
    Param,
    Unary,
    VectorRef,
    contains_generators,
)
from app.services.opalgebra.generators import AXES, SYMBOL_TABLE
from app.services.opalgebra.param_scalar import PARAMETER_NAMES

logger = logging.getLogger(__name__)

VECTOR_SYMBOLS = {symbol.upper(): symbol for symbol in SYMBOL_TABLE}
FUNCTION_ARITY = {"comm": 2, "dot": 2, "cross": 2, "adj": 1}
IMAGINARY_SYMBOLS = ("I", "i")

_SINGLE = {"+", "-", "*", "/", "^", "(", ")", "[", "]", ","}


@dataclass(frozen=True)
class Token:
    kind: str  # number, name, op, end
    text: str
    position: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if ch.isdigit() or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            while i < len(text) and text[i].isdigit():
                i += 1
            if i < len(text) and text[i] == ".":
                i += 1
                while i < len(text) and text[i].isdigit():
                    i += 1
            tokens.append(Token("number", text[start:i], _byte_offset(text, start)))
            continue
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            while i < len(text) and text[i].isascii() and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("name", text[start:i], _byte_offset(text, start)))
            continue
        if ch in _SINGLE:
            tokens.append(Token("op", ch, _byte_offset(text, start)))
            i += 1
            continue
        raise ExpressionSyntaxError(f"Unexpected character {ch!r}", _byte_offset(text, start), "syntax", text)
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class ExpressionParser:
    """Recursive-descent parser over a token list; one instance per input string."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # ----- token helpers -----

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "end":
            self.pos += 1
        return token

    def _at(self, text: str) -> bool:
        return self.current.kind == "op" and self.current.text == text

    def _error(self, message: str, token: Optional[Token] = None, kind: str = "syntax") -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, token.position, kind, self.text)

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            found = self.current.text or "end of input"
            raise self._error(f"Expected '{text}' but found '{found}'")
        return self._advance()

    # ----- grammar -----

    def parse(self) -> Node:
        if self.current.kind == "end":
            raise self._error("Empty expression")
        node = self._sum()
        if self.current.kind != "end":
            raise self._error(f"Unexpected '{self.current.text}'")
        return node

    def _sum(self) -> Node:
        node = self._product()
        while self._at("+") or self._at("-"):
            op = self._advance()
            node = Binary(op.text, node, self._product(), op.position)
        return node

    def _product(self) -> Node:
        node = self._unary()
        while self._at("*") or self._at("/"):
            op = self._advance()
            right = self._unary()
            if op.text == "/" and contains_generators(right):
                raise ExpressionSyntaxError(
                    "Denominator must not contain generators",
                    op.position,
                    "nonscalar-denominator",
                    self.text,
                )
            node = Binary(op.text, node, right, op.position)
        return node

    def _unary(self) -> Node:
        if self._at("-"):
            op = self._advance()
            return Unary("-", self._unary(), op.position)
        if self._at("+"):
            self._advance()
            return self._unary()
        return self._power()

    def _power(self) -> Node:
        base = self._postfix()
        if not self._at("^"):
            return base
        op = self._advance()
        exponent = self.current
        if exponent.kind != "number" or not exponent.text.isdigit():
            raise self._error("Exponent must be a nonnegative integer literal", exponent, "bad-exponent")
        self._advance()
        if self._at("^"):
            raise self._error("Chained exponents are not supported; use parentheses", kind="bad-exponent")
        return Binary("^", base, Number(Fraction(int(exponent.text)), exponent.position), op.position)

    def _postfix(self) -> Node:
        node = self._primary()
        while self._at("["):
            self._advance()
            node = Index(node, self._axis_index(), node.position)
            self._expect("]")
        return node

    def _axis_index(self) -> int:
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise self._error("Index must be an integer literal", token)
        self._advance()
        value = int(token.text)
        if value not in AXES:
            raise self._error(f"Index {value} out of range 1..3", token, "index-out-of-range")
        return value

    def _primary(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Number(Fraction(token.text), token.position)
        if self._at("("):
            self._advance()
            node = self._sum()
            self._expect(")")
            return node
        if token.kind != "name":
            found = token.text or "end of input"
            raise self._error(f"Unexpected '{found}'")

        name = token.text
        self._advance()
        if name in FUNCTION_ARITY:
            return self._call(name, token)
        if name in SYMBOL_TABLE:
            if not self._at("["):
                raise self._error(f"Generator '{name}' needs an index, e.g. {name}[1]")
            self._advance()
            index = self._axis_index()
            self._expect("]")
            return Atom(name, index, token.position)
        if name in VECTOR_SYMBOLS:
            return VectorRef(name, token.position)
        if name in PARAMETER_NAMES:
            return Param(name, token.position)
        if name in IMAGINARY_SYMBOLS:
            return Imaginary(token.position)
        raise self._error(f"Unknown symbol '{name}'", token, "unknown-symbol")

    def _call(self, name: str, token: Token) -> Node:
        self._expect("(")
        args = [self._sum()]
        while self._at(","):
            self._advance()
            args.append(self._sum())
        self._expect(")")
        if len(args) != FUNCTION_ARITY[name]:
            raise self._error(
                f"{name}() takes {FUNCTION_ARITY[name]} argument(s), got {len(args)}",
                token,
            )
        return Call(name, tuple(args), token.position)


def parse(text: str) -> Node:
    """Parse one expression.

    Raises:
        ExpressionSyntaxError: with the byte offset and an error kind of syntax,
            unknown-symbol, index-out-of-range, nonscalar-denominator or bad-exponent
    """
    return ExpressionParser(text).parse()
