"""Independent reference implementations used only by the tests.

Nothing here calls the evaluation or symbol code under test: finite-field
arithmetic goes through sympy's galoistools (coefficients highest degree
first), Bernoulli numbers are exact rationals, orders are brute force.
"""
from fractions import Fraction
from math import comb, exp, lgamma, log, pi

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_irreducible_p, gf_mul, gf_mul_ground, gf_pow_mod, gf_rem, gf_strip

CLASSICAL_IRREGULAR_BELOW_300 = [37, 59, 67, 101, 103, 131, 149, 157, 233, 257, 263, 271, 283, 293]


def brute_order(a, q):
    a %= q
    x, n = a, 1
    while x != 1:
        x = x * a % q
        n += 1
    return n


def bernoulli_exact(upto):
    """B_0..B_upto as Fractions via sum_{j<=m} C(m+1, j) B_j = 0."""
    B = [Fraction(1)]
    for m in range(1, upto + 1):
        s = sum(comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return B


def minkowski_float(p):
    m = p - 1
    logv = (m / 2) * log(4 / pi) + lgamma(p) - m * log(m) + (p - 2) / 2 * log(p)
    return exp(logv)


def first_irreducible(q, f):
    """Brute search in the documented order: (a_0, ..., a_{f-1}) lexicographic, a_0 first."""
    from itertools import product

    for low in product(range(q), repeat=f):
        if low[0] == 0:
            continue
        high_first = [1] + list(reversed(low))
        if gf_irreducible_p(high_first, q, ZZ):
            return tuple(low) + (1,)
    raise AssertionError


def pin_exponent_brute(n, p):
    r, d = 0, n
    while d % p == 0:
        d //= p
        r += 1
    pr = p**r
    c = next(c for c in range(n) if c % pr == 1 % pr and c % d == 0)
    return c * p ** (r - 1) % n


class GF:
    """F_{q^f} through galoistools.  Elements are high-first coefficient lists."""

    def __init__(self, q, modulus_low_first):
        self.q = q
        self.g = list(reversed([c % q for c in modulus_low_first]))
        self.f = len(modulus_low_first) - 1

    def from_low(self, coeffs):
        return gf_strip([c % self.q for c in reversed(coeffs)])

    def mul(self, a, b):
        return gf_rem(gf_mul(a, b, self.q, ZZ), self.g, self.q, ZZ)

    def pow(self, a, e):
        return gf_pow_mod(a, e, self.g, self.q, ZZ)

    def add(self, a, b):
        return gf_add(a, b, self.q, ZZ)

    def scale(self, a, c):
        return gf_mul_ground(a, c % self.q, self.q, ZZ)

    @property
    def order(self):
        return self.q**self.f


def oracle_eval(gf, elem, xi_bar, zeta):
    """Sum c * xi_bar^i * zeta^j, recomputed from the raw term table."""
    acc = []
    for (i, j), c in elem.terms:
        acc = gf.add(acc, gf.scale(gf.pow(zeta, j), c * pow(xi_bar, i, gf.q)))
    return gf_rem(acc, gf.g, gf.q, ZZ)


def oracle_mu(gf, factors, xi_bar, zeta, p):
    """mu with value^((q^f-1)/p) == zeta^mu, or None if a factor vanishes."""
    order = gf.order - 1
    total = [1]
    for elem, k in factors:
        v = oracle_eval(gf, elem, xi_bar, zeta)
        if not v:
            return None
        total = gf.mul(total, gf.pow(v, k % order))
    target = gf.pow(total, order // p)
    for mu in range(p):
        if gf.pow(zeta, mu) == target:
            return mu
    raise AssertionError("no p-th root of unity matched")


def oracle_mu_ctx(ctx, Q, word):
    gf = GF(ctx.q, ctx.field.modulus)
    zeta = gf.from_low(ctx.Q_list[Q].coeffs)
    return oracle_mu(gf, word.factors, ctx.xi_bar, zeta, ctx.p)


def oracle_int_mu(ctx, Q, a):
    """Symbol of a rational integer: (a mod q)^kappa matched against zeta powers."""
    gf = GF(ctx.q, ctx.field.modulus)
    zeta = gf.from_low(ctx.Q_list[Q].coeffs)
    target = gf.pow([a % ctx.q], (gf.order - 1) // ctx.p)
    for mu in range(ctx.p):
        if gf.pow(zeta, mu) == target:
            return mu
    raise AssertionError


def element_of_order(q, m):
    """Smallest residue of exact order m mod q (m | q - 1)."""
    for w in range(2, q):
        if pow(w, m, q) == 1 and all(pow(w, m // ell, q) != 1 for ell in prime_factors(m)):
            return w
    raise AssertionError


def prime_factors(m):
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def primes_congruent_one(m, count, start=2):
    out, q = [], max(start, m + 1)
    q += (1 - q) % m
    while len(out) < count:
        if isprime(q):
            out.append(q)
        q += m
    return out


# acceptance results collected for the terminal summary
ACCEPTANCE_LINES: dict = {}
