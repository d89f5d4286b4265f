"""A small Boolean query language for literature search engines.

Grammar (operators case-insensitive on input, uppercase on output):

    expr   := or
    or     := and ('OR' and)*
    and    := unary (('AND' unary) | ('NOT' unary))*   # infix NOT sugars to AND NOT
    unary  := 'NOT' unary | atom
    atom   := '(' expr ')' | '"' phrase '"' | term['*']

Adjacent atoms without an operator are a syntax error. OR groups are flat
(nested OR children are spliced on construction); AND is preserved as built,
and serialization parenthesizes every AND operand, so combine-with-AND chains
render as ((a) AND (b)) AND (c).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

_RESERVED = {"and", "or", "not"}
_TERM_FORBIDDEN = set('"()*')


class Dialect(enum.Enum):
    """Engine-specific rendering of the same query tree.

    All four target engines accept uppercase operators, double-quoted
    phrases, trailing-'*' wildcards, and parentheses, so the dialects
    currently render identically; the enum is the seam where they would
    diverge.
    """

    GENERIC = "generic"
    PUBMED = "pubmed"
    EMBASE = "embase"
    CINAHL = "cinahl"


class QuerySyntaxError(ValueError):
    """Syntax error with the character offset where parsing failed."""

    def __init__(self, offset: int, message: str):
        self.offset = offset
        super().__init__(f"syntax error at offset {offset}: {message}")


QueryExpr = Union["Term", "Phrase", "Not", "And", "Or"]


@dataclass(frozen=True)
class Term:
    word: str
    wildcard: bool = False

    def __post_init__(self):
        if not self.word:
            raise ValueError("term word must be nonempty")
        if any(ch.isspace() or ch in _TERM_FORBIDDEN for ch in self.word):
            raise ValueError(f"term word {self.word!r} contains whitespace or reserved characters")
        if self.word.lower() in _RESERVED:
            raise ValueError(f"term word {self.word!r} collides with an operator keyword")


@dataclass(frozen=True)
class Phrase:
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("phrase must be nonempty")
        if '"' in self.text:
            raise ValueError("phrase must not contain double quotes")


@dataclass(frozen=True)
class Not:
    inner: QueryExpr


@dataclass(frozen=True)
class And:
    children: tuple[QueryExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("AND requires at least two operands")


@dataclass(frozen=True)
class Or:
    children: tuple[QueryExpr, ...]

    def __post_init__(self):
        flat: list[QueryExpr] = []
        for child in self.children:
            if isinstance(child, Or):
                flat.extend(child.children)
            else:
                flat.append(child)
        object.__setattr__(self, "children", tuple(flat))
        if len(self.children) < 2:
            raise ValueError("OR requires at least two operands")


# -- parsing -----------------------------------------------------------------

_LPAREN = "lparen"
_RPAREN = "rparen"
_AND = "and"
_OR = "or"
_NOT = "not"
_TERM = "term"
_PHRASE = "phrase"
_END = "end"


@dataclass(frozen=True)
class _Token:
    kind: str
    value: object
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token(_LPAREN, "(", i))
            i += 1
        elif ch == ")":
            tokens.append(_Token(_RPAREN, ")", i))
            i += 1
        elif ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise QuerySyntaxError(i, "unterminated phrase; expected closing '\"'")
            body = text[i + 1:end]
            if not body:
                raise QuerySyntaxError(i, "empty phrase")
            tokens.append(_Token(_PHRASE, body, i))
            i = end + 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in '()"':
                i += 1
            raw = text[start:i]
            lowered = raw.lower()
            if lowered in _RESERVED:
                tokens.append(_Token(lowered, raw, start))
                continue
            wildcard = raw.endswith("*")
            word = raw[:-1] if wildcard else raw
            if not word:
                raise QuerySyntaxError(start, "expected a term before '*'")
            star = word.find("*")
            if star >= 0:
                raise QuerySyntaxError(start + star, "wildcard '*' is only allowed at the end of a term")
            tokens.append(_Token(_TERM, (word, wildcard), start))
    tokens.append(_Token(_END, None, n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _advance(self) -> _Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _accept(self, kind: str) -> bool:
        if self._peek().kind == kind:
            self._pos += 1
            return True
        return False

    def parse(self) -> QueryExpr:
        expr = self._parse_or()
        tok = self._peek()
        if tok.kind != _END:
            raise QuerySyntaxError(tok.offset, "expected an operator or end of input")
        return expr

    def _parse_or(self) -> QueryExpr:
        children = [self._parse_and()]
        while self._accept(_OR):
            children.append(self._parse_and())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def _parse_and(self) -> QueryExpr:
        children = [self._parse_unary()]
        while True:
            if self._accept(_AND):
                children.append(self._parse_unary())
            elif self._peek().kind == _NOT:
                # Infix form "a NOT b" is accepted as "a AND NOT b".
                self._advance()
                children.append(Not(self._parse_unary()))
            else:
                break
        return children[0] if len(children) == 1 else And(tuple(children))

    def _parse_unary(self) -> QueryExpr:
        if self._accept(_NOT):
            return Not(self._parse_unary())
        return self._parse_atom()

    def _parse_atom(self) -> QueryExpr:
        tok = self._peek()
        if tok.kind == _LPAREN:
            self._advance()
            expr = self._parse_or()
            closing = self._peek()
            if closing.kind != _RPAREN:
                raise QuerySyntaxError(closing.offset, "expected ')'")
            self._advance()
            return expr
        if tok.kind == _PHRASE:
            self._advance()
            return Phrase(tok.value)
        if tok.kind == _TERM:
            self._advance()
            word, wildcard = tok.value
            return Term(word, wildcard)
        raise QuerySyntaxError(tok.offset, "expected a term, quoted phrase, NOT, or '('")


def parse(text: str) -> QueryExpr:
    """Parse an engine-syntax Boolean query into an expression tree."""
    return _Parser(_tokenize(text)).parse()


# -- serialization ------------------------------------------------------------

def serialize(expr: QueryExpr, dialect: Dialect = Dialect.GENERIC) -> str:
    """Render a query tree; the result parses back to a structurally equal tree."""
    if not isinstance(dialect, Dialect):
        dialect = Dialect(dialect)
    return _render(expr)


def _render(expr: QueryExpr) -> str:
    if isinstance(expr, Term):
        return expr.word + ("*" if expr.wildcard else "")
    if isinstance(expr, Phrase):
        return f'"{expr.text}"'
    if isinstance(expr, Not):
        inner = _render(expr.inner)
        if isinstance(expr.inner, (And, Or)):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(expr, And):
        return " AND ".join(f"({_render(child)})" for child in expr.children)
    if isinstance(expr, Or):
        return " OR ".join(_render(child) for child in expr.children)
    raise TypeError(f"not a query expression: {expr!r}")


# -- construction helpers ------------------------------------------------------

def or_of_terms(terms: list[str]) -> QueryExpr:
    """OR together bare search terms; a trailing '*' marks a wildcard."""
    if not terms:
        raise ValueError("cannot build a query from an empty term list")
    nodes = []
    for raw in terms:
        wildcard = raw.endswith("*")
        nodes.append(Term(raw[:-1] if wildcard else raw, wildcard))
    return nodes[0] if len(nodes) == 1 else Or(tuple(nodes))


def and_combine(a: QueryExpr, b: QueryExpr) -> QueryExpr:
    """Conjoin two queries; rendering parenthesizes both sides."""
    return And((a, b))
