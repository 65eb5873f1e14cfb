"""Splitting contexts and p-th power residue symbols.

A :class:`SplitContext` pins down a prime q, a residue ``xi_bar`` of order n
and one ``zeta_bar`` per prime above the ideal ``(q, u*xi - v)``.  Symbols
are returned additively: ``mu`` in ``range(p)`` with
``alpha_bar ** kappa == zeta_bar ** mu``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Optional

from .arith import crt_pair, decompose_n, is_prime, kappa as _kappa, least_primitive_root, mult_order
from .cyc import CycRing, RadicalWord, int_embed, word_of
from .errors import (
    BadN,
    DividesPUV,
    InternalFault,
    NotCoprime,
    OutOfRange,
    PreconditionError,
    ZeroFactor,
)
from .resfield import Q_LIMIT, EvalPoint, FFElem, FqfField, build_field, eval_word, mu_p_root


@dataclass(frozen=True)
class SplitContext:
    p: int
    q: int
    u: Optional[int]
    v: Optional[int]
    n: int
    d: int
    r: int
    f: int
    kappa: int
    xi_bar: int
    field: FqfField
    Q_list: tuple[FFElem, ...]
    Q_exponents: tuple[int, ...]
    zeta_pin: Optional[int]
    points: tuple[EvalPoint, ...] = dc_field(repr=False, compare=False)

    @property
    def ring(self) -> CycRing:
        return CycRing(self.p, self.n)

    def point(self, Q_index: int) -> EvalPoint:
        if not 0 <= Q_index < len(self.points):
            raise OutOfRange(f"Q index {Q_index} outside 0..{len(self.points) - 1}")
        return self.points[Q_index]

    def summary(self) -> dict:
        """JSON-friendly description (big integers as strings)."""
        return {
            "p": self.p,
            "q": str(self.q),
            "u": None if self.u is None else str(self.u),
            "v": None if self.v is None else str(self.v),
            "n": self.n,
            "d": self.d,
            "r": self.r,
            "f": self.f,
            "kappa": str(self.kappa),
            "xi_bar": str(self.xi_bar),
            "modulus": [str(c) for c in self.field.modulus],
            "zeta_pin": self.zeta_pin,
            "Q": [
                {"index": i, "zeta_exponent": m, "zeta_bar": [str(c) for c in z.coeffs]}
                for i, (m, z) in enumerate(zip(self.Q_exponents, self.Q_list))
            ],
        }


def coset_representatives(q: int, p: int) -> list[int]:
    """Smallest representatives of the cosets of <q mod p> in (Z/p)^*."""
    seen = set()
    reps = []
    for m in range(1, p):
        if m in seen:
            continue
        reps.append(m)
        x = m
        while x not in seen:
            seen.add(x)
            x = x * q % p
    return reps


def pin_exponent(n: int, p: int) -> int:
    """``e`` with ``zeta = xi**e`` when ``p | n``: ``c * p**(r-1) mod n``."""
    pp = decompose_n(n, p)
    if pp.r == 0:
        raise PreconditionError(f"{p} does not divide n={n}")
    pr = p**pp.r
    c = crt_pair(1, pr, 0, pp.d)
    return c * p ** (pp.r - 1) % n


def _check_q(p: int, q: int):
    if not is_prime(p) or p < 3:
        raise PreconditionError(f"p={p} is not an odd prime")
    if not is_prime(q):
        raise PreconditionError(f"q={q} is not prime")
    if q >= Q_LIMIT:
        raise PreconditionError(f"q={q} exceeds 2^31")
    if q == p:
        raise DividesPUV(f"q={q} equals p")


def _assemble(p, q, u, v, n, xi_bar) -> SplitContext:
    pp = decompose_n(n, p)
    if pp.r >= 1:
        f = 1
        field = build_field(q, 1)
        e = pin_exponent(n, p)
        zb = field.elem(pow(xi_bar, e, q))
        zetas = (zb,)
        exps = (1,)
        pin = e
    else:
        f = mult_order(q, p)
        field = build_field(q, f)
        w = mu_p_root(field, p)
        exps = tuple(coset_representatives(q, p))
        zetas = tuple(w**m for m in exps)
        pin = None
    points = tuple(EvalPoint(field, p, n, xi_bar, z, pin) for z in zetas)
    return SplitContext(
        p=p,
        q=q,
        u=u,
        v=v,
        n=n,
        d=pp.d,
        r=pp.r,
        f=f,
        kappa=_kappa(q, f, p),
        xi_bar=xi_bar,
        field=field,
        Q_list=zetas,
        Q_exponents=exps,
        zeta_pin=pin,
        points=points,
    )


def build_context(p: int, q: int, u: int, v: int) -> SplitContext:
    """Context for the prime ``(q, u*xi - v)`` with ``xi_bar = v / u mod q``."""
    _check_q(p, q)
    if (p * u * v) % q == 0:
        raise DividesPUV(f"q={q} divides p*u*v")
    if gcd(u, v) != 1:
        raise NotCoprime(f"gcd(u, v) = {gcd(u, v)}")
    xi_bar = v * pow(u, -1, q) % q
    n = mult_order(xi_bar, q)
    return _assemble(p, q, u, v, n, xi_bar)


def units_mod(n: int) -> list[int]:
    return [s for s in range(1, n) if gcd(s, n) == 1] if n > 1 else [0]


def build_context_free(p: int, q: int, n: int, xi_choice_index: int) -> SplitContext:
    """Context with ``xi_bar = g**((q-1)/n * s)`` for the index-th unit ``s`` mod n."""
    _check_q(p, q)
    if n <= 2 or (q - 1) % n:
        raise BadN(f"n={n} must exceed 2 and divide q-1={q - 1}")
    units = units_mod(n)
    if not 0 <= xi_choice_index < len(units):
        raise OutOfRange(f"xi index {xi_choice_index} outside 0..{len(units) - 1}")
    g = least_primitive_root(q)
    xi_bar = pow(g, (q - 1) // n * units[xi_choice_index], q)
    return _assemble(p, q, None, None, n, xi_bar)


def build_context_k(p: int, q: int) -> SplitContext:
    """All primes of Q(zeta) above q: ``n = 1``, ``xi_bar = 1``."""
    _check_q(p, q)
    return _assemble(p, q, None, None, 1, 1)


def residue_symbol_at(point: EvalPoint, kappa: int, w: RadicalWord) -> int:
    value, hits = eval_word(w, point)
    if value is None:
        raise ZeroFactor(hits.index(True))
    powered = point.field._pow(value.coeffs, kappa)
    mu = point.zeta_log(powered)
    if mu is None:
        raise InternalFault("alpha^kappa is not a p-th root of unity")
    return mu


def residue_symbol(ctx: SplitContext, Q_index: int, w: RadicalWord) -> int:
    """``mu`` with ``(w / Q) = zeta**mu``; raises ZeroFactor if a factor meets Q."""
    return residue_symbol_at(ctx.point(Q_index), ctx.kappa, w)


def symbol_of_zeta(ctx: SplitContext, Q_index: int = 0) -> int:
    ctx.point(Q_index)
    return ctx.kappa % ctx.p


def symbol_of_int(ctx: SplitContext, Q_index: int, a: int) -> int:
    if a % ctx.q == 0:
        raise ZeroFactor(0, f"q={ctx.q} divides {a}")
    return residue_symbol(ctx, Q_index, word_of(int_embed(ctx.ring, a)))


def symbol_vector(ctx: SplitContext, w: RadicalWord) -> list[int]:
    """Symbols of ``w`` at every prime of the context, in Q order."""
    return [residue_symbol(ctx, i, w) for i in range(len(ctx.Q_list))]
