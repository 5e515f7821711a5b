from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int = 0
    end_col: int = 0

    def __str__(self):
        return f"{self.line}:{self.col}"

    def to(self, other: "Span") -> "Span":
        return Span(self.line, self.col, other.end_line, other.end_col)


class LexError(Exception):
    def __init__(self, message: str, span: Span):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


KEYWORDS = {
    "qfunc", "qstruct", "output", "qbit", "qnum", "qarray", "signed", "unsigned",
    "int", "real", "array", "allocate", "phase", "assign_amplitude", "control",
    "repeat", "within", "apply", "invert", "power", "and", "or", "not",
}

# Longest operators first so that e.g. "|=" wins over "|".
OPERATORS = [
    "**", "<<", ">>", "<=", ">=", "==", "!=", "|=", "^=", "+=",
    "(", ")", "{", "}", "[", "]", ",", ";", ":", ".",
    "+", "-", "*", "/", "<", ">", "&", "|", "^", "~",
]

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<number>[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>""" + "|".join(re.escape(o) for o in OPERATORS) + r""")
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "ident", "number", "op", "eof"
    text: str
    span: Span
    value: Union[Fraction, None] = None

    def is_op(self, text: str) -> bool:
        return self.kind == "op" and self.text == text

    def is_kw(self, text: str) -> bool:
        return self.kind == "kw" and self.text == text

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        if self.kind in ("ident", "number"):
            return f"{self.kind} '{self.text}'"
        return f"'{self.text}'"


def tokenize(source: Union[str, bytes]) -> list[Token]:
    """Split source text into tokens, dropping whitespace and ``//`` comments.

    The returned list always ends with an ``eof`` token.
    """
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(source)[:exc.start].decode("utf-8", errors="replace")
            line = prefix.count("\n") + 1
            col = len(prefix) - (prefix.rfind("\n") + 1) + 1
            raise LexError("invalid UTF-8 byte", Span(line, col, line, col + 1)) from None
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise LexError(f"unrecognized character {source[pos]!r}", Span(line, col, line, col + 1))
        kind = m.lastgroup
        text = m.group()
        span = Span(line, col, line, col + len(text))
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "number":
            exponent = text.lower().partition("e")[2]
            if exponent and abs(int(exponent)) > 400:
                raise LexError(f"numeric literal {text} out of range", span)
            tokens.append(Token("number", text, span, Fraction(text)))
        elif kind == "ident":
            tokens.append(Token("kw" if text in KEYWORDS else "ident", text, span))
        elif kind == "op":
            tokens.append(Token("op", text, span))
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("eof", "", Span(line, col, line, col)))
    return tokens
