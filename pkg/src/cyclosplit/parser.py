"""Recursive-descent parser for element expressions.

Grammar (whitespace is ignored)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' int)?
    int     := '-'? digits
    atom    := digits | 'xi' | 'zeta' | '(' expr ')'

A sum is folded into one ring element.  At the top level a product is kept
as a radical word: each factor becomes ``(element, exponent)``, ``/`` negates
the exponent and a leading minus contributes the factor ``-1``.  Division and
negative exponents are rejected anywhere below the top level.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .cyc import CycElem, CycRing, RadicalWord, int_embed, xi, zeta
from .errors import ParseError, SemanticError


@dataclass
class Num:
    value: int
    pos: int


@dataclass
class Sym:
    name: str
    pos: int


@dataclass
class Neg:
    arg: "Node"
    pos: int


@dataclass
class Pow:
    base: "Node"
    exp: int
    pos: int


@dataclass
class Group:
    inner: "Node"
    pos: int


@dataclass
class Sum:
    terms: list  # (sign, node)
    pos: int


@dataclass
class Product:
    items: list  # (op, node, offset of op) with op in "*/"
    pos: int


Node = Union[Num, Sym, Neg, Pow, Group, Sum, Product]


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.i = 0

    def offset(self, i=None) -> int:
        i = self.i if i is None else i
        return len(self.src[:i].encode("utf-8"))

    def fail(self, expected):
        raise ParseError(self.offset(), expected)

    def skip_ws(self):
        while self.i < len(self.src) and self.src[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.src[self.i] if self.i < len(self.src) else ""

    def eat(self, ch) -> bool:
        if self.peek() == ch:
            self.i += 1
            return True
        return False

    def parse(self) -> Node:
        node = self.expr()
        if self.peek():
            self.fail(["+", "-", "*", "/", "^", "end of input"])
        return node

    def expr(self) -> Node:
        pos = self.offset()
        terms = [(1, self.term())]
        while self.peek() in ("+", "-"):
            sign = 1 if self.src[self.i] == "+" else -1
            self.i += 1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 else Sum(terms, pos)

    def term(self) -> Node:
        pos = self.offset()
        items = [("*", self.unary(), pos)]
        while self.peek() in ("*", "/"):
            op, op_pos = self.src[self.i], self.offset()
            self.i += 1
            items.append((op, self.unary(), op_pos))
        return items[0][1] if len(items) == 1 else Product(items, pos)

    def unary(self) -> Node:
        self.skip_ws()
        pos = self.offset()
        if self.eat("-"):
            return Neg(self.unary(), pos)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        self.skip_ws()
        pos = self.offset()
        if self.eat("^"):
            return Pow(base, self.integer(signed=True), pos)
        return base

    def integer(self, signed=False) -> int:
        self.skip_ws()
        start = self.i
        if signed and self.peek() == "-":
            self.i += 1
            self.skip_ws()
        digits_at = self.i
        while self.i < len(self.src) and self.src[self.i].isdigit():
            self.i += 1
        if self.i == digits_at:
            self.fail(["integer"])
        return int(self.src[start : self.i].replace(" ", "").replace("\t", ""))

    def atom(self) -> Node:
        ch = self.peek()
        pos = self.offset()
        if ch.isdigit():
            return Num(self.integer(), pos)
        if ch == "(":
            self.i += 1
            inner = self.expr()
            if not self.eat(")"):
                self.fail([")", "+", "-", "*", "/", "^"])
            return Group(inner, pos)
        for name in ("zeta", "xi"):
            if self.src.startswith(name, self.i):
                end = self.i + len(name)
                if end < len(self.src) and (self.src[end].isalnum() or self.src[end] == "_"):
                    break
                self.i = end
                return Sym(name, pos)
        self.fail(["integer", "xi", "zeta", "(", "-"])


def _to_elem(node: Node, ring: CycRing) -> CycElem:
    if isinstance(node, Num):
        return int_embed(ring, node.value)
    if isinstance(node, Sym):
        return xi(ring) if node.name == "xi" else zeta(ring)
    if isinstance(node, Neg):
        return -_to_elem(node.arg, ring)
    if isinstance(node, Group):
        return _to_elem(node.inner, ring)
    if isinstance(node, Pow):
        if node.exp < 0:
            raise SemanticError(node.pos, "negative exponent inside a sum or group")
        return _to_elem(node.base, ring) ** node.exp
    if isinstance(node, Sum):
        acc = int_embed(ring, 0)
        for sign, t in node.terms:
            e = _to_elem(t, ring)
            acc = acc + e if sign > 0 else acc - e
        return acc
    if isinstance(node, Product):
        acc = int_embed(ring, 1)
        for op, item, op_pos in node.items:
            if op == "/":
                raise SemanticError(op_pos, "'/' is only allowed at the top level")
            acc = acc * _to_elem(item, ring)
        return acc
    raise TypeError(node)  # pragma: no cover


def _top_factors(node: Node, ring: CycRing, sign: int, out: list):
    if isinstance(node, Product):
        for op, item, _ in node.items:
            _top_factors(item, ring, sign if op == "*" else -sign, out)
        return
    if isinstance(node, Neg):
        out.append((int_embed(ring, -1), 1))
        _top_factors(node.arg, ring, sign, out)
        return
    if isinstance(node, Pow):
        out.append((_to_elem(node.base, ring), sign * node.exp))
        return
    out.append((_to_elem(node, ring), sign))


def parse_element(src: str, n: int, p: int) -> RadicalWord:
    """Parse ``src`` into a radical word over Z[xi, zeta] with the given orders."""
    ring = CycRing(p, n)
    tree = _Parser(src).parse()
    factors: list = []
    _top_factors(tree, ring, 1, factors)
    one = int_embed(ring, 1)
    kept = []
    for elem, k in factors:
        if k == 0 or elem == one:
            continue
        if elem.is_zero():
            raise SemanticError(0, "the expression contains a zero factor")
        kept.append((elem, k))
    return RadicalWord(tuple(kept))
