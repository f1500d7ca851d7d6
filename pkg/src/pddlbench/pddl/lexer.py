"""Tokenizer and s-expression reader for PDDL text."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

LPAREN = "("
RPAREN = ")"
NAME = "name"
VARIABLE = "variable"
KEYWORD = "keyword"


class PDDLSyntaxError(Exception):
    """Positioned parse failure. ``line`` and ``col`` are 1-based."""

    def __init__(self, message: str, line: int = 0, col: int = 0, expected: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


class IllegalCharacter(PDDLSyntaxError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    offset: int

    def __str__(self) -> str:
        return self.text


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<keyword>:[A-Za-z][A-Za-z0-9_\-]*)
  | (?P<variable>\?[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<name>[A-Za-z0-9_][A-Za-z0-9_\-]*|-)
    """,
    re.VERBOSE,
)

_KIND = {"lparen": LPAREN, "rparen": RPAREN, "keyword": KEYWORD, "variable": VARIABLE, "name": NAME}


def tokenize(source: Union[str, bytes]) -> Iterator[Token]:
    """Yield tokens, dropping whitespace and ``;`` comments and lowercasing text."""
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise IllegalCharacter(f"invalid utf-8 at byte {exc.start}", 1, exc.start + 1) from None
    pos = 0
    line = 1
    line_start = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise IllegalCharacter(
                f"illegal character {source[pos]!r}", line, pos - line_start + 1
            )
        group = m.lastgroup
        text = m.group()
        if group not in ("ws", "comment"):
            yield Token(_KIND[group], text.lower(), line, pos - line_start + 1, pos)
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()


@dataclass(frozen=True)
class SList:
    """A parenthesised list; ``open`` is the token of its left paren."""

    items: tuple
    open: Token

    def __len__(self) -> int:
        return len(self.items)

    def head(self) -> Token | None:
        if self.items and isinstance(self.items[0], Token):
            return self.items[0]
        return None


SExpr = Union[Token, SList]


def read_sexprs(source: Union[str, bytes]) -> list[SExpr]:
    """Read every top-level s-expression in ``source``."""
    stack: list[tuple[Token, list]] = []
    top: list[SExpr] = []
    for tok in tokenize(source):
        if tok.kind == LPAREN:
            stack.append((tok, []))
        elif tok.kind == RPAREN:
            if not stack:
                raise PDDLSyntaxError("unbalanced ')'", tok.line, tok.col)
            open_tok, items = stack.pop()
            node = SList(tuple(items), open_tok)
            (stack[-1][1] if stack else top).append(node)
        else:
            (stack[-1][1] if stack else top).append(tok)
    if stack:
        open_tok = stack[-1][0]
        raise PDDLSyntaxError("unclosed '('", open_tok.line, open_tok.col, expected=")")
    return top


def position(node: SExpr) -> tuple[int, int]:
    tok = node if isinstance(node, Token) else node.open
    return tok.line, tok.col
