"""Boolean query language: grammar, canonical printer and set evaluator.

Surface syntax: bare words are single terms, double-quoted strings are
terms or 2-3 token phrases, operators are AND, OR and unary NOT (keywords,
case-insensitive), with precedence NOT > AND > OR, left associativity and
parentheses for grouping. NOT complements against the evaluation universe.
"""

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from . import kernels as K
from .corpus import tokenize
from .index import InvertedIndex, match_ngram_ords

KEYWORDS = {"and", "or", "not"}


@dataclass(frozen=True)
class Term:
    token: str

    def __post_init__(self):
        if tokenize(self.token) != [self.token]:
            raise ValueError(f"{self.token!r} is not a single tokenizer token")


@dataclass(frozen=True)
class Phrase:
    tokens: tuple[str, ...]

    def __post_init__(self):
        if not 2 <= len(self.tokens) <= 3:
            raise ValueError(f"phrase length must be 2-3, got {len(self.tokens)}")
        for tok in self.tokens:
            if tokenize(tok) != [tok]:
                raise ValueError(f"{tok!r} is not a single tokenizer token")


@dataclass(frozen=True)
class And:
    left: "QueryAst"
    right: "QueryAst"


@dataclass(frozen=True)
class Or:
    left: "QueryAst"
    right: "QueryAst"


@dataclass(frozen=True)
class Not:
    child: "QueryAst"


QueryAst = Union[Term, Phrase, And, Or, Not]


class QuerySyntaxError(ValueError):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"at position {position}: {message}")


# --- lexer -----------------------------------------------------------------

_WORD_BREAK = set(' \t\r\n()"')


def _lex(text: str) -> list[tuple[str, str, int]]:
    """Token stream of (kind, value, position); kinds are WORD, QUOTED,
    LPAREN, RPAREN, AND, OR, NOT, EOF."""
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "(":
            out.append(("LPAREN", ch, i))
            i += 1
        elif ch == ")":
            out.append(("RPAREN", ch, i))
            i += 1
        elif ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise QuerySyntaxError(i, "unterminated quote")
            out.append(("QUOTED", text[i + 1 : end], i))
            i = end + 1
        else:
            start = i
            while i < n and text[i] not in _WORD_BREAK:
                i += 1
            word = text[start:i]
            lowered = word.lower()
            kind = lowered.upper() if lowered in KEYWORDS else "WORD"
            out.append((kind, word, start))
    out.append(("EOF", "", n))
    return out


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _lex(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> QueryAst:
        if self.peek()[0] == "EOF":
            raise QuerySyntaxError(0, "empty query")
        ast = self.parse_or()
        kind, value, pos = self.peek()
        if kind != "EOF":
            if kind in ("WORD", "QUOTED", "LPAREN"):
                raise QuerySyntaxError(pos, "expected an operator between operands")
            raise QuerySyntaxError(pos, f"unexpected {value!r}")
        return ast

    def parse_or(self) -> QueryAst:
        node = self.parse_and()
        while self.peek()[0] == "OR":
            self.advance()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> QueryAst:
        node = self.parse_unary()
        while self.peek()[0] == "AND":
            self.advance()
            node = And(node, self.parse_unary())
        return node

    def parse_unary(self) -> QueryAst:
        if self.peek()[0] == "NOT":
            self.advance()
            return Not(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> QueryAst:
        kind, value, pos = self.advance()
        if kind == "WORD":
            toks = tokenize(value)
            if len(toks) != 1:
                raise QuerySyntaxError(
                    pos, f"{value!r} is not a single term; quote it as a phrase"
                )
            return Term(toks[0])
        if kind == "QUOTED":
            toks = tokenize(value)
            if len(toks) == 1:
                return Term(toks[0])
            if 2 <= len(toks) <= 3:
                return Phrase(tuple(toks))
            raise QuerySyntaxError(
                pos, f"quoted phrase must contain 1-3 tokens, got {len(toks)}"
            )
        if kind == "LPAREN":
            node = self.parse_or()
            kind2, _, pos2 = self.advance()
            if kind2 != "RPAREN":
                raise QuerySyntaxError(pos, "unbalanced parenthesis")
            return node
        if kind == "RPAREN":
            raise QuerySyntaxError(pos, "unbalanced parenthesis")
        if kind == "EOF":
            raise QuerySyntaxError(pos, "dangling operator")
        raise QuerySyntaxError(pos, f"operator {value!r} where an operand was expected")


def parse_query(text: str) -> QueryAst:
    return _Parser(text).parse()


# --- printer ---------------------------------------------------------------

_PREC = {Or: 1, And: 2, Not: 3, Term: 4, Phrase: 4}


def print_query(ast: QueryAst) -> str:
    """Canonical form with minimal parentheses; parse(print(a)) == a."""

    def wrap(child: QueryAst, floor: int) -> str:
        s = print_query(child)
        return f"({s})" if _PREC[type(child)] < floor else s

    if isinstance(ast, Term):
        return f'"{ast.token}"' if ast.token in KEYWORDS else ast.token
    if isinstance(ast, Phrase):
        return '"' + " ".join(ast.tokens) + '"'
    if isinstance(ast, Not):
        return "NOT " + wrap(ast.child, 3)
    if isinstance(ast, And):
        # right operand at equal precedence keeps explicit grouping so
        # left associativity survives the round trip
        return wrap(ast.left, 2) + " AND " + wrap(ast.right, 3)
    if isinstance(ast, Or):
        return wrap(ast.left, 1) + " OR " + wrap(ast.right, 2)
    raise TypeError(f"not a query node: {ast!r}")


# --- evaluator ---------------------------------------------------------------


def eval_query_ords(
    ast: QueryAst, index: InvertedIndex, universe: np.ndarray
) -> np.ndarray:
    """Evaluate over a sorted ordinal universe; NOT complements within it."""
    if isinstance(ast, Term):
        return match_ngram_ords(index, (ast.token,), universe)
    if isinstance(ast, Phrase):
        return match_ngram_ords(index, ast.tokens, universe)
    if isinstance(ast, And):
        left = eval_query_ords(ast.left, index, universe)
        if not len(left):
            return left
        return K.intersect_sorted(left, eval_query_ords(ast.right, index, universe))
    if isinstance(ast, Or):
        return K.union_sorted(
            eval_query_ords(ast.left, index, universe),
            eval_query_ords(ast.right, index, universe),
        )
    if isinstance(ast, Not):
        return K.difference_sorted(universe, eval_query_ords(ast.child, index, universe))
    raise TypeError(f"not a query node: {ast!r}")


def eval_query(ast: QueryAst, index: InvertedIndex, universe: Iterable[str]) -> set[str]:
    uni = universe if isinstance(universe, np.ndarray) else index.ordinals(universe)
    return set(index.ids(eval_query_ords(ast, index, uni)))


def query_atoms(ast: QueryAst) -> list[tuple[str, ...]]:
    """All term/phrase n-grams in the query, left to right (for highlighting)."""
    if isinstance(ast, Term):
        return [(ast.token,)]
    if isinstance(ast, Phrase):
        return [ast.tokens]
    if isinstance(ast, Not):
        return query_atoms(ast.child)
    return query_atoms(ast.left) + query_atoms(ast.right)
