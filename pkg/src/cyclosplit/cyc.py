"""Exact elements of Z[xi, zeta] as exponent tables, and radical words.

An element is a finite table ``(i mod n, j mod p) -> integer`` standing for
``sum c * xi**i * zeta**j``.  Tables are not reduced modulo the cyclotomic
relations, so two different tables may denote the same algebraic integer;
nothing here needs equality in the ring, only evaluation at primes.

Quotients never appear inside an element.  A :class:`RadicalWord` is a
formal product ``prod e_i ** k_i`` with integer exponents; power-residue
symbols are additive in the exponents.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .arith import decompose_n
from .errors import PreconditionError, RingMismatch


@dataclass(frozen=True)
class CycRing:
    """Z[xi, zeta] with ``zeta`` of order ``p`` and ``xi`` of order ``n``."""

    p: int
    n: int

    def __post_init__(self):
        if self.p < 3 or self.n < 1:
            raise PreconditionError(f"bad ring parameters p={self.p}, n={self.n}")

    @property
    def d(self) -> int:
        return decompose_n(self.n, self.p).d

    @property
    def r(self) -> int:
        return decompose_n(self.n, self.p).r


class CycElem:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: CycRing, table: dict):
        self.ring = ring
        self.terms = tuple(sorted((k, c) for k, c in table.items() if c))

    @classmethod
    def _from_pairs(cls, ring, pairs):
        n, p = ring.n, ring.p
        table: dict[tuple[int, int], int] = {}
        for i, j, c in pairs:
            key = (i % n, j % p)
            table[key] = table.get(key, 0) + c
        return cls(ring, table)

    @property
    def table(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if isinstance(other, int):
            return int_embed(self.ring, other)
        if not isinstance(other, CycElem):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        table = self.table
        for k, c in other.terms:
            table[k] = table.get(k, 0) + c
        return CycElem(self.ring, table)

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.ring, {k: -c for k, c in self.terms})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        n, p = self.ring.n, self.ring.p
        table: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self.terms:
            for (i2, j2), c2 in other.terms:
                key = ((i1 + i2) % n, (j1 + j2) % p)
                table[key] = table.get(key, 0) + c1 * c2
        return CycElem(self.ring, table)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PreconditionError("negative powers live in RadicalWord, not CycElem")
        result = int_embed(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, CycElem) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __repr__(self):
        return f"CycElem({self})"

    def __str__(self):
        return format_elem(self)


def make(ring: CycRing, terms: Iterable[tuple[int, int, int]]) -> CycElem:
    """Element ``sum c * xi**i * zeta**j`` from ``(i, j, c)`` triples."""
    return CycElem._from_pairs(ring, terms)


def int_embed(ring: CycRing, c: int) -> CycElem:
    return CycElem(ring, {(0, 0): c})


def add(a: CycElem, b: CycElem) -> CycElem:
    return a + b


def mul(a: CycElem, b: CycElem) -> CycElem:
    return a * b


def neg(a: CycElem) -> CycElem:
    return -a


def zeta(ring: CycRing, j: int = 1) -> CycElem:
    return make(ring, [(0, j, 1)])


def xi(ring: CycRing, i: int = 1) -> CycElem:
    return make(ring, [(i, 0, 1)])


def format_elem(e: CycElem) -> str:
    """Canonical text, in the grammar accepted by :mod:`cyclosplit.parser`."""
    if not e.terms:
        return "0"
    out = []
    for idx, ((i, j), c) in enumerate(e.terms):
        mono = []
        if i:
            mono.append("xi" if i == 1 else f"xi^{i}")
        if j:
            mono.append("zeta" if j == 1 else f"zeta^{j}")
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = "*".join(mono)
        else:
            body = f"{mag}*" + "*".join(mono)
        if idx == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(out)


def galois_zeta(e: CycElem, k: int) -> CycElem:
    """Apply ``s_k: zeta -> zeta**k``, fixing xi."""
    p = e.ring.p
    if k % p == 0:
        raise PreconditionError(f"k={k} is not a unit mod {p}")
    return make(e.ring, [(i, k * j, c) for (i, j), c in e.terms])


def vandiver_unit(ring: CycRing, k: int) -> CycElem:
    """``1 + xi * zeta**k``."""
    if not 0 <= k <= ring.p - 1:
        raise PreconditionError(f"k={k} outside 0..{ring.p - 1}")
    return make(ring, [(0, 0, 1), (1, k, 1)])


class UnitClass(enum.Enum):
    CYCLOTOMIC_UNIT = "CyclotomicUnit"
    UNIT_TIMES_PRIME_ABOVE_P = "UnitTimesPrimeAboveP"
    ZERO = "Zero"
    RATIONAL_TWO = "RationalTwo"


def classify_unit(d: int, r: int, k: int, p: int) -> UnitClass:
    """Nature of ``1 + xi * zeta**k`` for ``n = d * p**r``.

    The element vanishes exactly when ``xi * zeta**k == -1``, which happens
    for ``(d, r, k) = (2, 1, p - 1)`` and for ``(2, 0, 0)`` where ``xi = -1``.
    """
    if not 0 <= k <= p - 1:
        raise PreconditionError(f"k={k} outside 0..{p - 1}")
    last = k == p - 1
    if d == 2:
        if r == 1 and last:
            return UnitClass.ZERO
        if r == 0 and k == 0:
            return UnitClass.ZERO
        return UnitClass.UNIT_TIMES_PRIME_ABOVE_P
    if d == 1:
        if k == 0 and r == 0:
            return UnitClass.RATIONAL_TWO
        return UnitClass.CYCLOTOMIC_UNIT
    return UnitClass.CYCLOTOMIC_UNIT


@dataclass(frozen=True)
class RadicalWord:
    """Formal product of ring elements raised to nonzero integer powers."""

    factors: tuple[tuple[CycElem, int], ...] = ()

    def __post_init__(self):
        for elem, k in self.factors:
            if elem.is_zero():
                raise PreconditionError("a radical word may not contain the zero element")
            if k == 0:
                raise PreconditionError("radical word exponents must be nonzero")

    def __mul__(self, other):
        return word_mul(self, other)

    def __len__(self):
        return len(self.factors)

    def __str__(self):
        return format_word(self)


def word(*factors: tuple[CycElem, int]) -> RadicalWord:
    return RadicalWord(tuple((e, k) for e, k in factors if k != 0))


def word_of(elem: CycElem, k: int = 1) -> RadicalWord:
    return RadicalWord(((elem, k),))


def word_mul(w1: RadicalWord, w2: RadicalWord) -> RadicalWord:
    return RadicalWord(w1.factors + w2.factors)


def word_inv(w: RadicalWord) -> RadicalWord:
    return RadicalWord(tuple((e, -k) for e, k in w.factors))


def word_pow(w: RadicalWord, k: int) -> RadicalWord:
    if k == 0:
        return RadicalWord()
    return RadicalWord(tuple((e, m * k) for e, m in w.factors))


def format_word(w: RadicalWord) -> str:
    if not w.factors:
        return "1"
    parts = []
    for elem, k in w.factors:
        parts.append(f"({format_elem(elem)})" + ("" if k == 1 else f"^{k}"))
    return "*".join(parts)


def half_exponent(a: int, p: int) -> int:
    """Exponent of ``zeta**((1 - a) / 2)`` with ``zeta**(1/2) = zeta**((p + 1) / 2)``."""
    return (1 - a) * ((p + 1) // 2) % p


def _real_unit(ring: CycRing, a: int, sign: int) -> RadicalWord:
    p = ring.p
    if not 1 <= a <= p - 1:
        raise PreconditionError(f"a={a} outside 1..{p - 1}")
    if a == 1:
        return RadicalWord()
    return word(
        (zeta(ring, half_exponent(a, p)), 1),
        (make(ring, [(0, 0, 1), (0, a, sign)]), 1),
        (make(ring, [(0, 0, 1), (0, 1, sign)]), -1),
    )


def real_unit_eps(ring: CycRing, a: int) -> RadicalWord:
    """``zeta**((1-a)/2) * (1 + zeta**a) / (1 + zeta)``."""
    return _real_unit(ring, a, 1)


def real_unit_varpi(ring: CycRing, a: int) -> RadicalWord:
    """``zeta**((1-a)/2) * (1 - zeta**a) / (1 - zeta)``."""
    return _real_unit(ring, a, -1)
