"""Exact integer and modular arithmetic.

Homogenized cyclotomic values, multiplicative orders, Bernoulli-number
regularity tests and small prime utilities.  Everything here is a pure
function of its integer arguments.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator

import mpmath
from sympy import divisors as _sympy_divisors
from sympy import factorint, isprime, mobius as _sympy_mobius, primerange
from sympy import cyclotomic_poly

from .errors import NotCoprime, NotDivisible, OutOfRange, PreconditionError

REGULARITY_BOUND = 2000


@dataclass(frozen=True)
class PrimePower:
    """The split ``n = d * p**r`` with ``gcd(d, p) == 1``."""

    n: int
    d: int
    r: int


@dataclass(frozen=True)
class RegularityReport:
    p: int
    regular: bool
    irregular_indices: tuple[int, ...]


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def primes_in(lo: int, hi: int) -> Iterator[int]:
    """Primes ``lo <= q <= hi`` in ascending order."""
    return iter(primerange(max(lo, 2), hi + 1))


def divisors(n: int) -> list[int]:
    return [int(e) for e in _sympy_divisors(n)]


def mobius(n: int) -> int:
    return int(_sympy_mobius(n))


def euler_phi(n: int) -> int:
    result = n
    for ell in factorint(n):
        result = result // ell * (ell - 1)
    return result


def cyclotomic_value(n: int, u: int, v: int) -> int:
    """Return ``v**phi(n) * Phi_n(u / v)`` exactly.

    Computed as the Moebius product of ``u**e - v**e`` over ``e | n``; the
    division is exact.  When some ``u**e == v**e`` (only ``|u| == |v|``) the
    product degenerates and the polynomial is evaluated directly.
    """
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if u == 0 and v == 0:
        raise PreconditionError("(u, v) must not be (0, 0)")
    num, den = 1, 1
    for e in divisors(n):
        mu = mobius(n // e)
        if mu == 0:
            continue
        term = u**e - v**e
        if term == 0:
            return _cyclotomic_value_direct(n, u, v)
        if mu == 1:
            num *= term
        else:
            den *= term
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def _cyclotomic_value_direct(n, u, v):
    coeffs = [int(c) for c in cyclotomic_poly(n, polys=True).all_coeffs()]
    deg = len(coeffs) - 1
    return sum(c * u ** (deg - i) * v**i for i, c in enumerate(coeffs))


def mult_order(a: int, q: int) -> int:
    """Least ``n >= 1`` with ``a**n == 1 (mod q)`` for a prime ``q``.

    Factors ``q - 1`` and strips prime factors from the exponent while the
    power stays 1.
    """
    a %= q
    if a == 0:
        raise NotCoprime(f"{q} divides {a}")
    order = q - 1
    for ell, k in factorint(q - 1).items():
        for _ in range(k):
            if pow(a, order // ell, q) == 1:
                order //= ell
            else:
                break
    return order


def decompose_n(n: int, p: int) -> PrimePower:
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    d, r = n, 0
    while d % p == 0:
        d //= p
        r += 1
    return PrimePower(n=n, d=d, r=r)


def kappa(q: int, f: int, p: int) -> int:
    """The symbol exponent ``(q**f - 1) / p``."""
    top = q**f - 1
    if top % p:
        raise NotDivisible(f"{p} does not divide {q}^{f} - 1")
    return top // p


def bernoulli_mod_p(p: int, upto: int) -> list[int]:
    """``B_0 .. B_upto`` reduced mod ``p`` (``upto <= p - 3``).

    Uses ``sum_{j<=m} C(m+1, j) B_j = 0``; every binomial and ``m + 1`` is a
    unit mod p in this range.  Odd ``B_j`` with ``j >= 3`` vanish and are
    skipped in the sums.
    """
    if upto > p - 3 and upto > 1:
        raise OutOfRange(f"indices above p-3 are not p-integral in general (p={p})")
    fact = [1] * (upto + 2)
    for i in range(1, upto + 2):
        fact[i] = fact[i - 1] * i % p
    inv_fact = [1] * (upto + 2)
    inv_fact[upto + 1] = pow(fact[upto + 1], -1, p)
    for i in range(upto + 1, 0, -1):
        inv_fact[i - 1] = inv_fact[i] * i % p

    B = [0] * (upto + 1)
    B[0] = 1
    if upto >= 1:
        B[1] = (-pow(2, -1, p)) % p
    for m in range(2, upto + 1):
        if m % 2:
            continue
        top = fact[m + 1]
        s = top * inv_fact[m] * B[1] % p  # j = 1 term: C(m+1, 1)
        s += top * inv_fact[m + 1]  # j = 0 term: C(m+1, 0) * B_0
        for j in range(2, m, 2):
            s += top * inv_fact[j] % p * inv_fact[m + 1 - j] % p * B[j]
        B[m] = (-s * pow(m + 1, -1, p)) % p
    return B


def is_regular(p: int, bound: int = REGULARITY_BOUND) -> RegularityReport:
    if p < 3 or not is_prime(p):
        raise PreconditionError(f"p must be an odd prime, got {p}")
    if p > bound:
        raise OutOfRange(f"p={p} exceeds the regularity bound {bound}")
    if p == 3:
        return RegularityReport(p=3, regular=True, irregular_indices=())
    B = bernoulli_mod_p(p, p - 3)
    bad = tuple(k for k in range(2, p - 2, 2) if B[k] == 0)
    return RegularityReport(p=p, regular=not bad, irregular_indices=bad)


def minkowski_bound(p: int, dps: int = 30) -> mpmath.mpf:
    """Minkowski bound of the p-th cyclotomic field, to ``dps`` digits."""
    if p < 3:
        raise PreconditionError("p must be >= 3")
    with mpmath.workdps(dps):
        m = p - 1
        value = (
            (4 / mpmath.pi) ** (mpmath.mpf(m) / 2)
            * mpmath.factorial(m)
            / mpmath.mpf(m) ** m
            * mpmath.sqrt(mpmath.mpf(p) ** (p - 2))
        )
        return +value


def crt_pair(a1: int, m1: int, a2: int, m2: int) -> int:
    """The ``x mod m1*m2`` with ``x = a1 (m1)``, ``x = a2 (m2)``, coprime moduli."""
    if gcd(m1, m2) != 1:
        raise NotCoprime(f"moduli {m1}, {m2} are not coprime")
    t = (a2 - a1) * pow(m1, -1, m2) % m2 if m2 > 1 else 0
    return (a1 + m1 * t) % (m1 * m2)


def trial_factor(n: int, bound: int) -> tuple[dict[int, int], int]:
    """Trial division of ``|n|`` by primes up to ``bound``.

    Returns the factorization found and the unfactored cofactor (1 when
    ``|n|`` was fully factored).
    """
    n = abs(n)
    found: dict[int, int] = {}
    if n == 0:
        return found, 0
    exhausted = True
    for ell in primerange(2, bound + 1):
        if ell * ell > n:
            exhausted = False
            break
        while n % ell == 0:
            found[ell] = found.get(ell, 0) + 1
            n //= ell
    if n > 1 and (not exhausted or n <= bound * bound):
        found[n] = found.get(n, 0) + 1
        n = 1
    return found, n


def least_primitive_root(q: int) -> int:
    if q == 2:
        return 1
    ells = list(factorint(q - 1))
    g = 2
    while any(pow(g, (q - 1) // ell, q) == 1 for ell in ells):
        g += 1
    return g
