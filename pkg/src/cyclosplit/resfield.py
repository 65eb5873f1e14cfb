"""Finite fields F_{q^f} and evaluation of cyclotomic elements at a prime.

Field elements are coefficient tuples of length ``f`` (constant term first)
reduced modulo a monic irreducible polynomial.  The modulus and the order-p
root are found by deterministic searches so that reports are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Optional, Sequence

from .arith import is_prime
from .cyc import CycElem, RadicalWord
from .errors import DivideByZero, NoRoot, PinMismatch, PreconditionError, RingMismatch

Q_LIMIT = 2**31


# -- polynomials over Z/q as coefficient lists, constant term first -----------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, q):
    prod_ = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod_[i + j] += x * y
    return _poly_reduce(prod_, mod, q)


def _poly_reduce(a, mod, q):
    f = len(mod) - 1
    a = [x % q for x in a]
    for k in range(len(a) - 1, f - 1, -1):
        c = a[k]
        if c:
            base = k - f
            for i in range(f):
                a[base + i] = (a[base + i] - c * mod[i]) % q
            a[k] = 0
    a = a[:f]
    return a + [0] * (f - len(a))


def _poly_powmod(a, e, mod, q):
    f = len(mod) - 1
    result = [1] + [0] * (f - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, q)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, mod, q)
    return result


def _poly_divmod(a, b, q):
    a = _trim([x % q for x in a])
    b = _trim([x % q for x in b])
    if not b:
        raise DivideByZero("polynomial division by zero")
    inv_lead = pow(b[-1], -1, q)
    quot = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead % q
        shift = len(a) - len(b)
        quot[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % q
        _trim(a)
    return quot, a


def _poly_gcd(a, b, q):
    a = _trim([x % q for x in a])
    b = _trim([x % q for x in b])
    while b:
        _, r = _poly_divmod(a, b, q)
        a, b = b, r
    return a


def is_irreducible(modulus: Sequence[int], q: int) -> bool:
    """Distinct-degree test for a monic polynomial (constant term first).

    ``g`` of degree ``f`` is irreducible iff ``t**(q**f) == t (mod g)`` and
    ``gcd(t**(q**i) - t, g) == 1`` for ``1 <= i <= f // 2``; any factor of a
    reducible ``g`` has degree at most ``f // 2``, so larger ``i`` add nothing.
    """
    mod = [x % q for x in modulus]
    f = len(mod) - 1
    if f == 1:
        return True
    if mod[0] == 0:
        return False
    t = [0, 1] + [0] * (f - 2)
    h = t
    for i in range(1, f + 1):
        h = _poly_powmod(h, q, mod, q)
        if i <= f // 2:
            diff = list(h)
            diff[1] = (diff[1] - 1) % q
            if len(_poly_gcd(diff, mod, q)) > 1:
                return False
    return h == t


# -- the field -----------------------------------------------------------------

@dataclass(frozen=True)
class FqfField:
    q: int
    f: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.q**self.f

    def elem(self, coeffs) -> "FFElem":
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        c = [x % self.q for x in coeffs]
        if len(c) > self.f:
            c = _poly_reduce(c, self.modulus, self.q)
        c += [0] * (self.f - len(c))
        return FFElem(self, tuple(c))

    def one(self) -> "FFElem":
        return self.elem(1)

    def zero(self) -> "FFElem":
        return self.elem(0)

    def from_encoding(self, k: int) -> "FFElem":
        """Element with coefficients the base-q digits of ``k`` (c_0 lowest)."""
        digits = []
        for _ in range(self.f):
            k, c = divmod(k, self.q)
            digits.append(c)
        return FFElem(self, tuple(digits))

    # raw tuple arithmetic, used on hot paths
    def _mul(self, a, b):
        if self.f == 1:
            return (a[0] * b[0] % self.q,)
        return tuple(_poly_mulmod(a, b, self.modulus, self.q))

    def _pow(self, a, e):
        if self.f == 1:
            return (pow(a[0], e, self.q),)
        return tuple(_poly_powmod(a, e, self.modulus, self.q))

    def _inv(self, a):
        if not any(a):
            raise DivideByZero("inverse of zero in F_%d^%d" % (self.q, self.f))
        if self.f == 1:
            return (pow(a[0], -1, self.q),)
        # extended Euclid against the modulus
        q = self.q
        r0, r1 = list(self.modulus), _trim(list(a))
        s0, s1 = [0], [1]
        while len(r1) > 1:
            quot, rem = _poly_divmod(r0, r1, q)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul_plain(quot, s1, q), q)
        if not r1:
            raise DivideByZero("element is not invertible")
        inv_c = pow(r1[0], -1, q)
        out = [x * inv_c % q for x in s1]
        return tuple(_poly_reduce(out, self.modulus, q))


def _poly_sub(a, b, q):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q for i in range(n)]
    return _trim(out) or [0]


def _poly_mul_plain(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return out


@dataclass(frozen=True)
class FFElem:
    field: FqfField
    coeffs: tuple[int, ...]

    def _same(self, other):
        if isinstance(other, int):
            return self.field.elem(other)
        if other.field != self.field:
            raise PreconditionError("elements of different fields")
        return other

    def __add__(self, other):
        other = self._same(other)
        q = self.field.q
        return FFElem(self.field, tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        q = self.field.q
        return FFElem(self.field, tuple(-a % q for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._same(other))

    def __mul__(self, other):
        other = self._same(other)
        return FFElem(self.field, self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return ff_inv(self) ** (-e)
        return FFElem(self.field, self.field._pow(self.coeffs, e))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else (f"{c}*t" if i == 1 else f"{c}*t^{i}"))
        return " + ".join(terms) or "0"


def ff_add(a: FFElem, b: FFElem) -> FFElem:
    return a + b


def ff_mul(a: FFElem, b: FFElem) -> FFElem:
    return a * b


def ff_pow(a: FFElem, e: int) -> FFElem:
    return a**e


def ff_inv(a: FFElem) -> FFElem:
    return FFElem(a.field, a.field._inv(a.coeffs))


def build_field(q: int, f: int) -> FqfField:
    """F_{q^f} with the first irreducible monic modulus in search order.

    Candidates ``t**f + a_{f-1} t**(f-1) + ... + a_0`` are tried in
    lexicographic order of ``(a_0, a_1, ..., a_{f-1})``, each ascending, so
    ``a_0`` varies slowest.  For ``f == 1`` the modulus is ``t``.
    """
    if not is_prime(q):
        raise PreconditionError(f"q={q} is not prime")
    if q >= Q_LIMIT:
        raise PreconditionError(f"q={q} exceeds 2^31")
    if f < 1:
        raise PreconditionError("f must be >= 1")
    if f == 1:
        return FqfField(q, 1, (0, 1))
    for low in product(range(1, q), *[range(q)] * (f - 1)):
        modulus = tuple(low) + (1,)
        if is_irreducible(modulus, q):
            return FqfField(q, f, modulus)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def mu_p_root(field: FqfField, p: int) -> FFElem:
    """Deterministic element of exact order ``p``.

    Scans nonzero ``h`` by ascending encoding ``c_0 + c_1 q + ...`` and
    returns the first ``h**((q^f - 1)/p) != 1``.  When ``p`` divides
    ``(q^f - 1)/(q - 1)`` every constant maps to 1, so the scan starts at
    ``t``; the result is the same.
    """
    q, f = field.q, field.f
    top = q**f - 1
    if top % p:
        raise NoRoot(f"{p} does not divide {q}^{f} - 1")
    k = top // p
    start = 1
    if f > 1 and (top // (q - 1)) % p == 0:
        start = q
    enc = start
    while enc <= top:
        h = field.from_encoding(enc)
        w = h**k
        if not w.is_one():
            return w
        enc += 1
    raise NoRoot("no element of order p")  # unreachable by Cauchy


# -- evaluation at a prime -----------------------------------------------------

@dataclass
class EvalPoint:
    """A prime above q seen through its residue map.

    ``xi_bar`` is a residue mod q of order ``n``; ``zeta_bar`` has order p.
    When ``zeta_pin`` is set, ``zeta_bar`` must equal ``xi_bar**zeta_pin``.
    """

    field: FqfField
    p: int
    n: int
    xi_bar: int
    zeta_bar: FFElem
    zeta_pin: Optional[int] = None
    _zeta_pows: list = dc_field(default_factory=list, repr=False)
    _xi_pows: dict = dc_field(default_factory=dict, repr=False)
    _log: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        q = self.field.q
        self.xi_bar %= q
        if self.zeta_pin is not None:
            expect = self.field.elem(pow(self.xi_bar, self.zeta_pin, q))
            if expect != self.zeta_bar:
                raise PinMismatch(
                    f"zeta_bar={self.zeta_bar} differs from xi_bar^{self.zeta_pin}={expect}"
                )
        pows = [self.field.one().coeffs]
        z = self.zeta_bar.coeffs
        for _ in range(self.p - 1):
            pows.append(self.field._mul(pows[-1], z))
        self._zeta_pows = pows
        self._log = {zp: j for j, zp in enumerate(pows)}

    def zeta_log(self, value: tuple) -> Optional[int]:
        """``j`` with ``zeta_bar**j == value``, or None."""
        return self._log.get(value)

    def xi_pow(self, i: int) -> int:
        v = self._xi_pows.get(i)
        if v is None:
            v = self._xi_pows[i] = pow(self.xi_bar, i, self.field.q)
        return v

    def zeta_pow(self, j: int) -> tuple:
        return self._zeta_pows[j % self.p]

    def eval_raw(self, e: CycElem) -> tuple:
        ring = e.ring
        if ring.p != self.p or ring.n not in (1, self.n):
            raise RingMismatch(f"element ring {ring} cannot be evaluated at p={self.p}, n={self.n}")
        q, f = self.field.q, self.field.f
        acc = [0] * f
        for (i, j), c in e.terms:
            scal = c * self.xi_pow(i) % q if i else c % q
            zp = self._zeta_pows[j]
            for t in range(f):
                if zp[t]:
                    acc[t] += scal * zp[t]
        return tuple(x % q for x in acc)

    def eval(self, e: CycElem) -> FFElem:
        return FFElem(self.field, self.eval_raw(e))

    def with_zeta(self, zeta_bar: FFElem) -> "EvalPoint":
        return EvalPoint(self.field, self.p, self.n, self.xi_bar, zeta_bar, None)


def eval_elem(
    e: CycElem, xi_bar: int, zeta_bar: FFElem, zeta_pin: Optional[int] = None
) -> FFElem:
    """Image of ``e`` under ``xi -> xi_bar``, ``zeta -> zeta_bar``."""
    point = EvalPoint(zeta_bar.field, e.ring.p, e.ring.n, xi_bar, zeta_bar, zeta_pin)
    return point.eval(e)


def eval_word(w: RadicalWord, point: EvalPoint) -> tuple[Optional[FFElem], tuple[bool, ...]]:
    """``prod eval(factor) ** exponent``; ``None`` when some factor vanishes.

    The second component flags, per factor, whether it evaluated to zero.
    """
    field = point.field
    num = field.one().coeffs
    den = field.one().coeffs
    hits = []
    for elem, k in w.factors:
        v = point.eval_raw(elem)
        hit = not any(v)
        hits.append(hit)
        if hit:
            continue
        if k > 0:
            num = field._mul(num, field._pow(v, k) if k != 1 else v)
        else:
            den = field._mul(den, field._pow(v, -k) if k != -1 else v)
    if any(hits):
        return None, tuple(hits)
    if den != field.one().coeffs:
        num = field._mul(num, field._inv(den))
    return FFElem(field, num), tuple(hits)
