"""Parser and printer for ``.gl`` schema documents.

Grammar (whitespace-insensitive, ``#`` starts a line comment)::

    document         := (granule_decl | constraint_block)+
    granule_decl     := "granules" IDENT+ ";"
    constraint_block := "constraints" "{" (constraint ";")* "}"
    constraint       := ["!"] ("Sub" | "Disj") "(" term "," term ")"
    term             := IDENT | "bot" | "top"

Declarations and constraint blocks may come in any order and may repeat.
``bot`` and ``top`` need no declaration and cannot be declared.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import RESERVED, Atom, Constraint, Granule, Pred, Schema, granule

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[;{}(),!])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "punct" or "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind in ("ident", "punct"):
            out.append(Token(kind, m.group(), line, col))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    col = pos - line_start + 1
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text or t.kind == "eof":
            shown = repr(t.text) if t.kind != "eof" else "end of input"
            self.error(f"expected {text!r}, found {shown}")
        self.i += 1
        return t

    def ident(self, what: str) -> Token:
        t = self.tok
        if t.kind != "ident":
            shown = repr(t.text) if t.kind != "eof" else "end of input"
            self.error(f"expected {what}, found {shown}")
        self.i += 1
        return t

    def document(self):
        decls: list[Token] = []
        constraints: list[tuple[Constraint, list[Token]]] = []
        if self.tok.kind == "eof":
            self.error("empty document")
        while self.tok.kind != "eof":
            t = self.tok
            if t.text == "granules" and t.kind == "ident":
                self.i += 1
                names = [self.ident("granule name")]
                while self.tok.kind == "ident":
                    names.append(self.ident("granule name"))
                self.expect(";")
                decls.extend(names)
            elif t.text == "constraints" and t.kind == "ident":
                self.i += 1
                self.expect("{")
                while not (self.tok.kind == "punct" and self.tok.text == "}"):
                    if self.tok.kind == "eof":
                        self.error("unterminated constraint block")
                    constraints.append(self.constraint())
                    self.expect(";")
                self.expect("}")
            else:
                self.error(f"expected 'granules' or 'constraints', found {t.text!r}")
        return decls, constraints

    def constraint(self) -> tuple[Constraint, list[Token]]:
        positive = True
        if self.tok.text == "!" and self.tok.kind == "punct":
            self.i += 1
            positive = False
        head = self.ident("'Sub' or 'Disj'")
        if head.text not in ("Sub", "Disj"):
            self.error(f"expected 'Sub' or 'Disj', found {head.text!r}", head)
        self.expect("(")
        left = self.ident("granule name")
        self.expect(",")
        right = self.ident("granule name")
        self.expect(")")
        pred = Pred.SUB if head.text == "Sub" else Pred.DISJ
        atom = Atom(pred, granule(left.text), granule(right.text))
        return Constraint(atom, positive), [left, right]


def _declare(decls: Iterable[Token]) -> set[Granule]:
    named = set()
    for t in decls:
        if t.text in RESERVED:
            raise ParseError(f"{t.text!r} is reserved and cannot be declared", t.line, t.column)
        named.add(granule(t.text))
    return named


def _check_known(terms: list[Token], known: set[Granule]):
    for t in terms:
        if t.text not in RESERVED and granule(t.text) not in known:
            raise ParseError(f"unknown granule {t.text!r}", t.line, t.column)


def parse_schema(text: str) -> Schema:
    decls, constraints = _Parser(text).document()
    named = _declare(decls)
    for _, terms in constraints:
        _check_known(terms, named)
    return Schema(frozenset(named), frozenset(c for c, _ in constraints))


def parse_constraint(text: str, universe: Optional[Iterable[Granule]] = None) -> Constraint:
    """Parse a single constraint, as used for command-line queries."""
    p = _Parser(text)
    c, terms = p.constraint()
    if p.tok.text == ";":
        p.i += 1
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after constraint")
    if universe is not None:
        _check_known(terms, set(universe))
    return c


def format_schema(schema: Schema) -> str:
    """Canonical text for a schema; parsing it gives the same schema back."""
    lines = []
    if schema.named:
        lines.append("granules " + " ".join(g.name for g in schema.named) + ";")
    lines.append("constraints {")
    lines.extend(f"  {c};" for c in schema.sorted_constraints())
    lines.append("}")
    return "\n".join(lines) + "\n"


def load(path) -> Schema:
    with open(path, encoding="utf-8") as fh:
        return parse_schema(fh.read())
