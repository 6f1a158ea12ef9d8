"""A small operator-expression language for stating algebraic relations.

Grammar (EBNF)::

    expr   := term (('+' | '-') term)*
    term   := factor factor*            # juxtaposition is the product
    factor := atom ('^' INT)?
    atom   := NAME | SCALAR | '(' expr ')' | '[' expr ',' expr ']'
                            | '{' expr ',' expr '}'

Square brackets build the commutator, braces the anticommutator.  A NAME is
letters followed by optional digits and at most one trailing '+' or '-'; a
sign binds to the name only when immediately adjacent, so ``X- Y`` is the
product of the operators X- and Y while ``X - Y`` is a difference.  SCALAR
literals are nonnegative integers or rationals like ``1/2``; the name ``q``
is reserved and evaluates to the grading root of unity.  Relation texts are
written so that the whole expression should evaluate to zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from .core import OperatorMatrix
from .errors import RelationSyntaxError, ShapeError, UnboundIdentifierError
from .qarith import GradingParams

__all__ = [
    "Name",
    "ScalarLit",
    "Sum",
    "Diff",
    "Prod",
    "Pow",
    "Comm",
    "AComm",
    "RelationAST",
    "parse_relation",
    "print_relation",
    "eval_relation",
]


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class ScalarLit:
    value: Fraction


@dataclass(frozen=True)
class Sum:
    left: "RelationAST"
    right: "RelationAST"


@dataclass(frozen=True)
class Diff:
    left: "RelationAST"
    right: "RelationAST"


@dataclass(frozen=True)
class Prod:
    factors: tuple["RelationAST", ...]


@dataclass(frozen=True)
class Pow:
    base: "RelationAST"
    exponent: int


@dataclass(frozen=True)
class Comm:
    left: "RelationAST"
    right: "RelationAST"


@dataclass(frozen=True)
class AComm:
    left: "RelationAST"
    right: "RelationAST"


RelationAST = Union[Name, ScalarLit, Sum, Diff, Prod, Pow, Comm, AComm]


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<rational>\d+/\d+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*[+-]?)
  | (?P<punct>[+\-^()\[\]{},])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME, RATIONAL, INT, or the punctuation character itself
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RelationSyntaxError(
                f"unexpected character {text[pos]!r}", pos, ("NAME", "SCALAR", "operator")
            )
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        value = m.group()
        if m.lastgroup == "rational":
            tokens.append(_Token("RATIONAL", value, m.start()))
        elif m.lastgroup == "int":
            tokens.append(_Token("INT", value, m.start()))
        elif m.lastgroup == "name":
            tokens.append(_Token("NAME", value, m.start()))
        else:
            tokens.append(_Token(value, value, m.start()))
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


_ATOM_STARTS = ("NAME", "INT", "RATIONAL", "(", "[", "{")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise RelationSyntaxError(
                f"got {tok.text!r}", tok.offset, (kind,)
            )
        return self.advance()

    def parse(self) -> RelationAST:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "EOF":
            raise RelationSyntaxError(
                f"trailing input {tok.text!r}", tok.offset, ("EOF", "+", "-")
            )
        return node

    def expr(self) -> RelationAST:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            rhs = self.term()
            node = Sum(node, rhs) if op.kind == "+" else Diff(node, rhs)
        return node

    def term(self) -> RelationAST:
        factors = [self.factor()]
        while self.peek().kind in _ATOM_STARTS:
            factors.append(self.factor())
        if len(factors) == 1:
            return factors[0]
        return Prod(tuple(factors))

    def factor(self) -> RelationAST:
        base = self.atom()
        if self.peek().kind == "^":
            self.advance()
            tok = self.expect("INT")
            return Pow(base, int(tok.text))
        return base

    def atom(self) -> RelationAST:
        tok = self.peek()
        if tok.kind == "NAME":
            self.advance()
            return Name(tok.text)
        if tok.kind == "INT":
            self.advance()
            return ScalarLit(Fraction(int(tok.text)))
        if tok.kind == "RATIONAL":
            self.advance()
            num, den = tok.text.split("/")
            return ScalarLit(Fraction(int(num), int(den)))
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind in ("[", "{"):
            close = "]" if tok.kind == "[" else "}"
            self.advance()
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(close)
            return Comm(left, right) if close == "]" else AComm(left, right)
        raise RelationSyntaxError(f"got {tok.text!r}", tok.offset, _ATOM_STARTS)


def parse_relation(text: str) -> RelationAST:
    """Parse relation text into an expression tree."""
    if not text.strip():
        raise RelationSyntaxError("empty relation", 0, _ATOM_STARTS)
    return _Parser(text).parse()


_PREC_SUM, _PREC_PROD, _PREC_POW, _PREC_ATOM = 0, 1, 2, 3


def _prec(node: RelationAST) -> int:
    if isinstance(node, (Sum, Diff)):
        return _PREC_SUM
    if isinstance(node, Prod):
        return _PREC_PROD
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _fmt(node: RelationAST, min_prec: int) -> str:
    text = _fmt_bare(node)
    if _prec(node) < min_prec:
        return f"({text})"
    return text


def _fmt_bare(node: RelationAST) -> str:
    if isinstance(node, Name):
        return node.name
    if isinstance(node, ScalarLit):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Sum):
        return f"{_fmt(node.left, _PREC_SUM)} + {_fmt(node.right, _PREC_PROD)}"
    if isinstance(node, Diff):
        return f"{_fmt(node.left, _PREC_SUM)} - {_fmt(node.right, _PREC_PROD)}"
    if isinstance(node, Prod):
        return " ".join(_fmt(f, _PREC_POW) for f in node.factors)
    if isinstance(node, Pow):
        return f"{_fmt(node.base, _PREC_ATOM)}^{node.exponent}"
    if isinstance(node, Comm):
        return f"[{_fmt(node.left, _PREC_SUM)}, {_fmt(node.right, _PREC_SUM)}]"
    if isinstance(node, AComm):
        return f"{{{_fmt(node.left, _PREC_SUM)}, {_fmt(node.right, _PREC_SUM)}}}"
    raise TypeError(f"not a relation node: {node!r}")


def print_relation(node: RelationAST) -> str:
    """Render a tree back to text; parsing the result reproduces the tree."""
    return _fmt(node, _PREC_SUM)


_Value = Union[complex, np.ndarray]


def _as_matrix(value: _Value, dim: int) -> np.ndarray:
    if isinstance(value, np.ndarray):
        return value
    return value * np.eye(dim, dtype=np.complex128)


def _combine_add(a: _Value, b: _Value, dim: int, sign: int) -> _Value:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        am, bm = _as_matrix(a, dim), _as_matrix(b, dim)
        return am + bm if sign > 0 else am - bm
    return a + b if sign > 0 else a - b


def _combine_mul(a: _Value, b: _Value) -> _Value:
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return a @ b
    return a * b


def _eval(node: RelationAST, env, g: GradingParams, dim: int) -> _Value:
    if isinstance(node, Name):
        if node.name == "q":
            return g.q
        try:
            op = env[node.name]
        except KeyError:
            raise UnboundIdentifierError(f"identifier {node.name!r} is not bound") from None
        if op.dim != dim:
            raise ShapeError(f"operator {node.name!r} has dim {op.dim}, expected {dim}")
        return op.entries
    if isinstance(node, ScalarLit):
        return complex(node.value)
    if isinstance(node, Sum):
        return _combine_add(_eval(node.left, env, g, dim), _eval(node.right, env, g, dim), dim, +1)
    if isinstance(node, Diff):
        return _combine_add(_eval(node.left, env, g, dim), _eval(node.right, env, g, dim), dim, -1)
    if isinstance(node, Prod):
        value = _eval(node.factors[0], env, g, dim)
        for factor in node.factors[1:]:
            value = _combine_mul(value, _eval(factor, env, g, dim))
        return value
    if isinstance(node, Pow):
        base = _eval(node.base, env, g, dim)
        if isinstance(base, np.ndarray):
            out = np.eye(dim, dtype=np.complex128)
            for _ in range(node.exponent):
                out = out @ base
            return out
        return base**node.exponent
    if isinstance(node, (Comm, AComm)):
        left = _as_matrix(_eval(node.left, env, g, dim), dim)
        right = _as_matrix(_eval(node.right, env, g, dim), dim)
        if isinstance(node, Comm):
            return left @ right - right @ left
        return left @ right + right @ left
    raise TypeError(f"not a relation node: {node!r}")


def eval_relation(
    ast: RelationAST, env: Mapping[str, OperatorMatrix], g: GradingParams
) -> OperatorMatrix:
    """Evaluate a tree against named operators; q resolves to g.q.

    A scalar-valued expression is returned as that multiple of the identity.
    """
    if not env:
        raise ValueError("evaluation environment is empty")
    dims = {op.dim for op in env.values()}
    if len(dims) != 1:
        raise ShapeError(f"environment mixes dimensions {sorted(dims)}")
    dim = dims.pop()
    return OperatorMatrix(_as_matrix(_eval(ast, env, g, dim), dim))
