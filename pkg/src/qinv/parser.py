"""Recursive-descent parser for scalar and matrix expressions.

Grammar (``^`` binds tightest, then unary minus, then ``* /``, then ``+ -``;
binary operators associate to the left)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)*
    atom   := INT | IDENT | '(' expr ')'

There is no implicit multiplication: ``2s`` is a syntax error.  Values are
computed in an ambient field (Q for the integers, Q(vars) for polynomial
and proper rational rings) and then checked for membership in the target
ring, so ``1/s`` is accepted in a ring that is proper in ``s``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Union

from .matrix import Matrix
from .poly import RatFunc
from .rings import (
    Integers,
    NotAUnit,
    PolyRing,
    ProperRatRing,
    QQ,
    RatFuncField,
    Ring,
    RingElement,
    ValueOutsideRing,
)

MAX_EXPONENT = 256
MAX_DEPTH = 200
# bound on (degree or coefficient bits) x exponent for a single power
MAX_SIZE = 4096


class ParseError(ValueError):
    """Syntax or semantic error; ``pos`` is a 0-based character offset."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.msg = message
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class UnknownVariable(ParseError):
    pass


class OutsideRing(ParseError):
    """The expression denotes a value that is not in the ring."""


class RaggedRows(ParseError):
    pass


class MatrixEntryError(ParseError):
    def __init__(self, row: int, col: int, err: ParseError):
        super().__init__(f"entry ({row},{col}): {err.msg}", err.pos)
        self.row, self.col, self.cause = row, col, err


# -- AST ------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int
    pos: int


Node = Union[Num, Var, Neg, BinOp, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, pos=None):
        return ParseError(msg, self.peek()[2] if pos is None else pos, self.text)

    def parse(self) -> Node:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise self.error(f"unexpected {val!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            _, op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, pos = self.take()
            node = BinOp(op, node, self.unary(), pos)
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            _, _, pos = self.take()
            self._enter(pos)
            node = Neg(self.unary(), pos)
            self.depth -= 1
            return node
        return self.power()

    def power(self):
        node = self.atom()
        while self.peek()[:2] == ("op", "^"):
            _, _, pos = self.take()
            kind, val, vpos = self.peek()
            if kind == "op" and val == "-":
                raise self.error("negative exponent", vpos)
            if kind != "int":
                raise self.error("exponent must be a nonnegative integer literal", vpos)
            self.take()
            k = int(val)
            if k > MAX_EXPONENT:
                raise self.error(f"exponent {k} exceeds limit {MAX_EXPONENT}", vpos)
            node = Pow(node, k, pos)
        return node

    def _enter(self, pos):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("expression nested too deeply", pos)

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return Num(int(val), pos)
        if kind == "ident":
            self.take()
            return Var(val, pos)
        if (kind, val) == ("op", "("):
            self.take()
            self._enter(pos)
            node = self.expr()
            self.depth -= 1
            if self.peek()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            self.take()
            return node
        if kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {val!r}")


def parse_ast(text: str) -> Node:
    if not isinstance(text, str):
        raise ParseError("expression must be a string")
    return _Parser(text).parse()


# -- evaluation -----------------------------------------------------------------------

def _ambient(ring: Ring) -> Ring:
    if isinstance(ring, Integers):
        return QQ
    if isinstance(ring, (PolyRing, ProperRatRing)):
        return RatFuncField(ring.variables)
    return ring


def _size(v) -> int:
    if isinstance(v, RatFunc):
        return max(v.num.total_degree(), v.den.total_degree(), 0) + max(
            (max(c.numerator.bit_length(), c.denominator.bit_length()) for c in v.num.terms.values()), default=0)
    if isinstance(v, Fraction):
        return max(v.numerator.bit_length(), v.denominator.bit_length())
    if isinstance(v, int):
        return v.bit_length()
    if isinstance(v, tuple):
        return sum(abs(t).bit_length() for t in v)
    return 0


def _eval(node: Node, R: Ring, text: str):
    if isinstance(node, Num):
        return R.from_int(node.value)
    if isinstance(node, Var):
        if node.name not in R.variables:
            raise UnknownVariable(f"unknown variable {node.name!r}", node.pos, text)
        return R.variable(node.name)
    if isinstance(node, Neg):
        return R.neg(_eval(node.arg, R, text))
    if isinstance(node, Pow):
        base = _eval(node.base, R, text)
        if _size(base) * node.exp > MAX_SIZE:
            raise ParseError("power too large", node.pos, text)
        return R.pow(base, node.exp)
    a = _eval(node.left, R, text)
    b = _eval(node.right, R, text)
    if node.op == "+":
        return R.add(a, b)
    if node.op == "-":
        return R.sub(a, b)
    if node.op == "*":
        return R.mul(a, b)
    if R.is_zero(b):
        raise OutsideRing("division by zero", node.pos, text)
    try:
        return R.mul(a, R.inv(b))
    except NotAUnit:
        raise OutsideRing(f"divisor {R.format(b)} is not a unit", node.pos, text) from None


def parse_scalar(text: str, ring: Ring) -> RingElement:
    """Parse ``text`` into an element of ``ring``."""
    node = parse_ast(text)
    amb = _ambient(ring)
    try:
        value = _eval(node, amb, text)
    except RecursionError:
        raise ParseError("expression too long", 0, text) from None
    if amb is not ring:
        try:
            value = ring.convert(value)
        except ValueOutsideRing as e:
            raise OutsideRing(str(e), 0, text) from None
    return RingElement(ring, value)


def parse_matrix(rows: Sequence[Sequence[str]], ring: Ring) -> Matrix:
    if not isinstance(rows, (list, tuple)) or not rows or not all(isinstance(r, (list, tuple)) for r in rows):
        raise ParseError("matrix must be a nonempty list of rows")
    n = len(rows[0])
    if n == 0:
        raise ParseError("matrix rows must be nonempty")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise RaggedRows(f"row {i} has {len(r)} entries, expected {n}")
    out = []
    for i, r in enumerate(rows):
        row = []
        for j, s in enumerate(r):
            if isinstance(s, int) and not isinstance(s, bool):
                s = str(s)
            try:
                row.append(parse_scalar(s, ring).value)
            except ParseError as e:
                raise MatrixEntryError(i, j, e) from None
        out.append(row)
    return Matrix._raw(ring, out)


def print_canonical(x) -> str:
    """Canonical text for a ring element or a matrix (JSON-style nested lists)."""
    if isinstance(x, RingElement):
        return x.ring.format(x.value)
    if isinstance(x, Matrix):
        rows = x.to_strings()
        return "[" + ", ".join("[" + ", ".join(f'"{s}"' for s in r) + "]" for r in rows) + "]"
    raise TypeError(f"cannot print {type(x).__name__}")
