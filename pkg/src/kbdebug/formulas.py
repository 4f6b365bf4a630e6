"""Propositional formula AST, ASCII parser/printer and syntactic profiles.

Grammar (ASCII): atoms ``[A-Za-z_][A-Za-z0-9_]*``, ``~`` negation, ``&``
conjunction, ``|`` disjunction, ``->`` implication, ``<->`` biconditional,
``false`` falsum, parentheses.  Operator precedence from highest to lowest:
``~``, ``&``, ``|``, ``->``, ``<->``; the two arrow operators associate to
the right.  ``&`` and ``|`` chains parse into a single n-ary node.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

# Connective tokens, also used as keys in syntactic profiles and
# element-probability files.
NOT = "NOT"
AND = "AND"
OR = "OR"
IMP = "IMP"
IFF = "IFF"
FALSE = "FALSE"


@dataclass(frozen=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Falsum:
    def __repr__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Not:
    child: "Formula"

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class And:
    children: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("conjunction needs at least two children")

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Or:
    children: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("disjunction needs at least two children")

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Iff:
    lhs: "Formula"
    rhs: "Formula"

    def __repr__(self) -> str:
        return render(self)


Formula = Union[Atom, Falsum, Not, And, Or, Implies, Iff]


class ParseError(ValueError):
    """Malformed formula text; ``pos`` is a 0-based character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<lpar>\()|(?P<rpar>\))|(?P<iff><->)|(?P<imp>->)"
    r"|(?P<neg>~)|(?P<and>&)|(?P<or>\|)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", len(text) - len(stripped))
        kind = m.lastgroup
        value = m.group(kind)
        yield kind, value, m.start(kind)
        pos = m.end()
    yield "end", "", len(text)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = list(_tokenize(text))
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}" if tok[1] else f"expected {kind}", tok[2])
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {value!r}", pos)
        return f

    def iff(self) -> Formula:
        lhs = self.imp()
        if self.peek()[0] == "iff":
            self.next()
            return Iff(lhs, self.iff())
        return lhs

    def imp(self) -> Formula:
        lhs = self.disj()
        if self.peek()[0] == "imp":
            self.next()
            return Implies(lhs, self.imp())
        return lhs

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek()[0] == "or":
            self.next()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek()[0] == "and":
            self.next()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "neg":
            return Not(self.unary())
        if kind == "lpar":
            inner = self.iff()
            self.expect("rpar")
            return inner
        if kind == "ident":
            if value == "false":
                return Falsum()
            return Atom(value)
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", pos)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Falsum: 6}


def _prec(f: Formula) -> int:
    return _PREC[type(f)]


def render(f: Formula) -> str:
    """ASCII form that parses back to a structurally equal formula."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, Not):
        child = render(f.child)
        return "~" + (child if _prec(f.child) >= 5 else f"({child})")
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        me = _prec(f)
        # equal-precedence children stay parenthesized so nesting survives
        # the n-ary flattening done by the parser
        parts = [render(c) if _prec(c) > me else f"({render(c)})" for c in f.children]
        return op.join(parts)
    if isinstance(f, (Implies, Iff)):
        op = " -> " if isinstance(f, Implies) else " <-> "
        me = _prec(f)
        lhs = render(f.lhs) if _prec(f.lhs) > me else f"({render(f.lhs)})"
        rhs = render(f.rhs) if _prec(f.rhs) >= me else f"({render(f.rhs)})"
        return lhs + op + rhs
    raise TypeError(f"not a formula: {f!r}")


def atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, Falsum):
        return frozenset()
    if isinstance(f, Not):
        return atoms(f.child)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for c in f.children:
            out |= atoms(c)
        return out
    return atoms(f.lhs) | atoms(f.rhs)


def syntactic_profile(f: Formula) -> dict[str, int]:
    """Occurrence counts of every atom name and connective in ``f``.

    An n-ary conjunction/disjunction counts n-1 connective occurrences,
    matching its rendering with n-1 infix operators.
    """
    counts: dict[str, int] = {}

    def bump(key: str, n: int = 1) -> None:
        counts[key] = counts.get(key, 0) + n

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            bump(g.name)
        elif isinstance(g, Falsum):
            bump(FALSE)
        elif isinstance(g, Not):
            bump(NOT)
            walk(g.child)
        elif isinstance(g, (And, Or)):
            bump(AND if isinstance(g, And) else OR, len(g.children) - 1)
            for c in g.children:
                walk(c)
        else:
            bump(IMP if isinstance(g, Implies) else IFF)
            walk(g.lhs)
            walk(g.rhs)

    walk(f)
    return counts
