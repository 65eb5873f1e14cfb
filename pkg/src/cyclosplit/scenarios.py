"""Data generators, corollary verifiers and witness-search drivers.

Verifiers never assume their hypotheses: each stated conclusion becomes a
condition record with the expected and observed value, and a report is
flagged probative only when every precondition (including p-principality)
is established.
"""
from __future__ import annotations

import enum
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Callable, Iterable, Optional, Sequence

from sympy import integer_nthroot

from .arith import cyclotomic_value, divisors, is_prime, is_regular, mult_order, primes_in, trial_factor
from .cyc import (
    CycRing,
    UnitClass,
    classify_unit,
    int_embed,
    make,
    real_unit_eps,
    real_unit_varpi,
    vandiver_unit,
    word,
    word_of,
)
from .errors import (
    BadM,
    BadS,
    DividesPUV,
    EmptyFamily,
    InternalFault,
    PolicyMisuse,
    PreconditionError,
    WrongDivisor,
    ZeroFactor,
)
from .kummer import family_c2, family_c4, family_cj3, family_crit_m, family_thm1, is_totally_split
from .symbols import (
    build_context,
    build_context_free,
    build_context_k,
    residue_symbol,
    symbol_of_int,
    symbol_of_zeta,
    units_mod,
)

log = logging.getLogger(__name__)


# -- parallel helper ---------------------------------------------------------

def ordered_map(fn: Callable, items: Sequence, jobs: int = 1) -> list:
    """``[fn(x) for x in items]``, optionally across processes; order preserved."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _first_hit(fn: Callable, items: Sequence, is_hit: Callable, jobs: int = 1) -> list:
    """Outcomes of ``fn`` in order, stopping after the first hit.

    With several workers the items are evaluated in batches, so some work past
    the hit may be done, but the returned prefix never depends on ``jobs``.
    """
    items = list(items)
    out = []
    if jobs <= 1:
        for x in items:
            res = fn(x)
            out.append(res)
            if is_hit(res):
                break
        return out
    batch = jobs * 4
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for start in range(0, len(items), batch):
            for res in pool.map(fn, items[start : start + batch]):
                out.append(res)
                if is_hit(res):
                    return out
    return out


# -- policy ------------------------------------------------------------------

class Principality(enum.Enum):
    PRINCIPAL = "Principal"
    NOT_PRINCIPAL = "NotPrincipal"
    UNKNOWN = "Unknown"


class PolicyMode(enum.Enum):
    REGULAR = "RegularAutomatic"
    TABLE = "SuppliedTable"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Policy:
    mode: PolicyMode
    path: Optional[str] = None
    supplied: tuple[tuple[int, bool], ...] = ()

    @classmethod
    def regular(cls) -> "Policy":
        return cls(PolicyMode.REGULAR)

    @classmethod
    def unknown(cls) -> "Policy":
        return cls(PolicyMode.UNKNOWN)

    @classmethod
    def from_table(cls, path: str) -> "Policy":
        with open(path, encoding="utf-8") as fh:
            table = parse_policy_table(fh.read())
        return cls(PolicyMode.TABLE, path, tuple(sorted(table.items())))

    @classmethod
    def parse(cls, spec: str) -> "Policy":
        """``regular``, ``unknown`` or ``table:PATH``."""
        if spec == "regular":
            return cls.regular()
        if spec == "unknown":
            return cls.unknown()
        if spec.startswith("table:"):
            return cls.from_table(spec[len("table:") :])
        raise PreconditionError(f"unknown policy {spec!r}")

    def lookup(self, q: int) -> Optional[bool]:
        return dict(self.supplied).get(q)

    def describe(self) -> str:
        return self.mode.value if self.path is None else f"{self.mode.value}({self.path})"


def parse_policy_table(text: str) -> dict[int, bool]:
    """Lines ``q 0|1``; ``#`` starts a comment."""
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("0", "1"):
            raise PreconditionError(f"policy table line {lineno}: expected 'q 0|1', got {raw!r}")
        table[int(parts[0])] = parts[1] == "1"
    return table


def p_principality(q: int, p: int, policy: Policy) -> Principality:
    if q == p or not is_prime(q):
        raise PreconditionError(f"q={q} must be a prime different from p={p}")
    if policy.mode is PolicyMode.REGULAR:
        if not is_regular(p).regular:
            raise PolicyMisuse(f"p={p} is irregular; automatic policy does not apply")
        return Principality.PRINCIPAL
    if policy.mode is PolicyMode.TABLE:
        hit = policy.lookup(q)
        if hit is None:
            return Principality.UNKNOWN
        return Principality.PRINCIPAL if hit else Principality.NOT_PRINCIPAL
    return Principality.UNKNOWN


# -- reports -----------------------------------------------------------------

@dataclass
class VerifyReport:
    case: str
    conditions: list = dc_field(default_factory=list)
    probative: bool = False
    notes: list = dc_field(default_factory=list)
    inputs: dict = dc_field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c["pass"] for c in self.conditions)

    def check(self, description: str, expected, observed):
        self.conditions.append(
            {
                "condition": description,
                "expected": str(expected),
                "observed": str(observed),
                "pass": expected == observed,
            }
        )

    def failed(self) -> list:
        return [c for c in self.conditions if not c["pass"]]

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "inputs": self.inputs,
            "conditions": self.conditions,
            "overall": self.overall,
            "probative": self.probative,
            "notes": self.notes,
        }


@dataclass
class WitnessResult:
    found: bool
    q: Optional[int] = None
    detail: object = None
    primes_scanned: int = 0
    primes_skipped: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "q": None if self.q is None else str(self.q),
            "detail": self.detail,
            "primes_scanned": self.primes_scanned,
            "primes_skipped": self.primes_skipped,
        }


# -- generators --------------------------------------------------------------

@dataclass(frozen=True)
class P3Candidate:
    s: int
    t: int
    u: int
    v: int
    accepted: bool
    reason: Optional[str] = None


def p3_solutions(s: int, t: int) -> P3Candidate:
    """``(u, v)`` with ``u + zeta v = (s + zeta t)**3`` in Z[zeta_3]."""
    u = s**3 + t**3 - 3 * s * t * t
    v = 3 * s * s * t - 3 * s * t * t
    if v == 0:
        return P3Candidate(s, t, u, v, False, "v = 0")
    g = gcd(u, v)
    if g > 1:
        return P3Candidate(s, t, u, v, False, f"gcd(u, v) = {g}")
    if gcd(s, t) != 1:
        return P3Candidate(s, t, u, v, False, f"gcd(s, t) = {gcd(s, t)}")
    if (s + t) % 3 == 0:
        return P3Candidate(s, t, u, v, False, "s + t divisible by 3")
    return P3Candidate(s, t, u, v, True)


def pth_power_pairs(p: int, z0: int, x_range: Iterable[int]) -> list[tuple[int, int]]:
    """Coprime ``(x, y)`` with ``x + y = z0**p`` and ``x*y != 0``."""
    if z0 == 0:
        raise PreconditionError("z0 must be nonzero")
    return _pairs_with_sum(z0**p, x_range)


def pth_power_pairs_shift(p: int, nu: int, c: int, x_range: Iterable[int]) -> list[tuple[int, int]]:
    """Coprime ``(x, y)`` with ``x + y = p**(nu*p - 1) * c**p``."""
    if nu < 1 or c == 0 or c % p == 0:
        raise PreconditionError("need nu >= 1 and c prime to p")
    return _pairs_with_sum(p ** (nu * p - 1) * c**p, x_range)


def _pairs_with_sum(total, x_range):
    out = []
    for x in x_range:
        y = total - x
        if x and y and gcd(x, y) == 1:
            out.append((x, y))
    return out


def _exact_root(m: int, p: int) -> Optional[int]:
    root, exact = integer_nthroot(abs(m), p)
    if not exact:
        return None
    return root if m >= 0 else -root


def _shift_decomposition(m: int, p: int) -> Optional[tuple[int, int]]:
    """``(nu, c)`` with ``m = p**(nu*p - 1) * c**p``, or None."""
    if m == 0:
        return None
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    if (k + 1) % p:
        return None
    c = _exact_root(m, p)
    return None if c is None else ((k + 1) // p, c)


def prime_divisors_upto(value: int, bound: int) -> list[int]:
    """Primes ``<= bound`` dividing ``value`` (trial division)."""
    if value == 0:
        return []
    found, _ = trial_factor(value, bound)
    return sorted(ell for ell in found if ell <= bound)


# -- corollary verifiers -----------------------------------------------------

COROLLARY_DIVISOR = {
    "C2": "Phi_p(u, v)",
    "C3": "u - v",
    "C4": "Phi_2p(u, v)",
    "C6": "u + v",
    "C5extra": "Phi_2p(u, v)",
}


def _corollary_value(case, p, u, v):
    if case == "C2":
        return cyclotomic_value(p, u, v)
    if case == "C3":
        return u - v
    if case in ("C4", "C5extra"):
        return cyclotomic_value(2 * p, u, v)
    if case == "C6":
        return u + v
    raise PreconditionError(f"unknown corollary case {case!r}")


def _ring1(p):
    return CycRing(p, 1)


def _one_plus_zeta(p, j, sign=1):
    return make(_ring1(p), [(0, 0, 1), (0, j, sign)])


def _sym_or_none(ctx, Q, w):
    try:
        return residue_symbol(ctx, Q, w)
    except ZeroFactor:
        return "undefined (factor vanishes)"


def _sym_int(ctx, Q, a):
    return _sym_or_none(ctx, Q, word_of(int_embed(_ring1(ctx.p), a)))


def verify_corollary(case: str, p: int, u: int, v: int, q: int, policy: Policy) -> VerifyReport:
    value = _corollary_value(case, p, u, v)
    if value % q:
        raise WrongDivisor(f"q={q} does not divide {COROLLARY_DIVISOR[case]} = {value}")
    if (p * u * v) % q == 0:
        raise DividesPUV(f"q={q} divides p*u*v")
    rep = VerifyReport(case, inputs={"p": p, "u": str(u), "v": str(v), "q": str(q)})
    principality = p_principality(q, p, policy)
    rep.probative = principality is Principality.PRINCIPAL and p > 3
    rep.notes.append(f"principality: {principality.value} ({policy.describe()})")
    if p == 3 and case in ("C2", "C4", "C6", "C5extra"):
        rep.notes.append("conclusions are derived for p > 3; p = 3 failures are expected")
    ctx = build_context(p, q, u, v)
    p2 = p * p

    if case == "C2":
        rep.check("q = 1 mod p^2", 1, q % p2)
        _zero_chain(rep, ctx, [0], "at q_K = (q, u zeta - v)", extra_ints=(2, u, v), js=range(p))
        kctx = build_context_k(p, q)
        report = is_totally_split(kctx, family_c2(p))
        rep.check("K(root(1 + zeta^j)) splits q totally", True, report.totally_split)
    elif case == "C3":
        rep.check("q^f = 1 mod p^2", 1, pow(q, ctx.f, p2))
        _zero_chain(rep, ctx, range(len(ctx.Q_list)), "at every Q", extra_ints=(u, v, 2), js=range(p))
    elif case in ("C4", "C5extra"):
        rep.check("q = 1 mod p^2", 1, q % p2)
        _minus_chain(rep, ctx, [0], "at q_K = (q, u zeta + v)", u, v)
        kctx = build_context_k(p, q)
        report = is_totally_split(kctx, family_c4(p))
        rep.check("K(root((1 - zeta^j)/(1 - zeta))) splits q totally", True, report.totally_split)
        if case == "C5extra":
            rep.check("sym(p) = 0 at q_K", 0, _sym_int(ctx, 0, p))
            for j in range(1, p):
                w = word_of(_one_plus_zeta(p, j, -1))
                rep.check(f"sym(1 - zeta^{j}) = 0 at q_K", 0, _sym_or_none(ctx, 0, w))
    elif case == "C6":
        rep.check("q^f = 1 mod p^2", 1, pow(q, ctx.f, p2))
        _minus_chain(rep, ctx, range(len(ctx.Q_list)), "at every Q", u, v)
    return rep


def _zero_chain(rep, ctx, Qs, where, extra_ints, js):
    p = ctx.p
    for Q in Qs:
        for a in extra_ints:
            rep.check(f"sym({a}) = 0 {where} [Q{Q}]", 0, _sym_int(ctx, Q, a))
        for j in js:
            w = word_of(_one_plus_zeta(p, j))
            rep.check(f"sym(1 + zeta^{j}) = 0 {where} [Q{Q}]", 0, _sym_or_none(ctx, Q, w))


def _minus_chain(rep, ctx, Qs, where, u, v):
    p = ctx.p
    for Q in Qs:
        su = _sym_int(ctx, Q, u)
        rep.check(f"sym(v) = sym(u) {where} [Q{Q}]", su, _sym_int(ctx, Q, v))
        rep.check(f"sym(p) = sym(u) {where} [Q{Q}]", su, _sym_int(ctx, Q, p))
        for j in range(1, p):
            s = _sym_or_none(ctx, Q, word_of(_one_plus_zeta(p, j, -1)))
            neg = (-s) % p if isinstance(s, int) else s
            rep.check(f"-sym(1 - zeta^{j}) = sym(u) {where} [Q{Q}]", su, neg)


# -- lemma relations ---------------------------------------------------------

LEMMA_VARIANTS = ("eps", "varpi", "eps_p_shift")


def verify_lemma_relation(variant: str, p: int, x: int, y: int, q: int) -> VerifyReport:
    """``sym(x + zeta^k y) = k/2 sym(zeta) + sym(U_{k+1})`` for ``k = 1 .. p-2``."""
    if variant not in LEMMA_VARIANTS:
        raise PreconditionError(f"unknown variant {variant!r}")
    total = x + y
    if variant == "eps_p_shift":
        if _shift_decomposition(total, p) is None:
            raise PreconditionError(f"x + y = {total} is not p^(nu p - 1) c^p")
    elif _exact_root(total, p) is None:
        raise PreconditionError(f"x + y = {total} is not a {p}-th power")
    m = 2 * p if variant == "varpi" else p
    value = cyclotomic_value(m, x, y)
    if value % q:
        raise WrongDivisor(f"q={q} does not divide Phi_{m}(x, y) = {value}")
    if (2 * p * x * y) % q == 0:
        raise DividesPUV(f"q={q} divides 2*p*x*y")
    ctx = build_context(p, q, x, y)
    if ctx.n != m:
        raise InternalFault(f"expected n={m}, got {ctx.n}")
    rep = VerifyReport(
        f"lemma:{variant}", inputs={"p": p, "x": str(x), "y": str(y), "q": str(q)}, probative=True
    )
    ring = _ring1(p)
    unit = real_unit_varpi if variant == "varpi" else real_unit_eps
    s_zeta = symbol_of_zeta(ctx, 0)
    inv2 = (p + 1) // 2
    s_p = symbol_of_int(ctx, 0, p)
    s_total = symbol_of_int(ctx, 0, total)
    if variant == "eps_p_shift":
        rep.check("sym(x + y) = -sym(p)", (-s_p) % p, s_total)
    else:
        rep.check("sym(x + y) = 0", 0, s_total)
    for k in range(1, p - 1):
        lhs = residue_symbol(ctx, 0, word_of(make(ring, [(0, 0, x), (0, k, y)])))
        if variant == "eps_p_shift":
            lhs = (lhs + s_p) % p
        rhs = (k * inv2 * s_zeta + residue_symbol(ctx, 0, unit(ring, k + 1))) % p
        rep.check(f"k={k}", rhs, lhs)
    return rep


# -- predicted symbols -------------------------------------------------------

def verify_predicted_symbols(case: str, p: int, x: int, y: int, q: int) -> VerifyReport:
    if case not in ("T32_i", "T32_ii", "T31"):
        raise PreconditionError(f"unknown case {case!r}")
    m = 2 * p if case == "T31" else p
    value = cyclotomic_value(m, x, y)
    if value % q:
        raise WrongDivisor(f"q={q} does not divide Phi_{m}(x, y) = {value}")
    if (p * x * y) % q == 0:
        raise DividesPUV(f"q={q} divides p*x*y")
    ctx = build_context(p, q, x, y)
    rep = VerifyReport(case, inputs={"p": p, "x": str(x), "y": str(y), "q": str(q)}, probative=False)
    rep.notes.append("predictions hold for genuine solutions; generic data is expected to fail")
    ring = _ring1(p)
    if case == "T32_i":
        s_zeta = symbol_of_zeta(ctx, 0)
        inv4 = pow(4, -1, p)
        for kp in range(1, (p - 3) // 2 + 1):
            a = p - 2 * kp - 1
            rep.check(
                f"sym(eps_{a}) = -k'(k'+1) sym(zeta), k'={kp}",
                (-kp * (kp + 1) * s_zeta) % p,
                _sym_or_none(ctx, 0, real_unit_eps(ring, a)),
            )
            a = p - 2 * kp
            rep.check(
                f"sym(eps_{a}) = (1/4 - k'^2) sym(zeta), k'={kp}",
                ((inv4 - kp * kp) * s_zeta) % p,
                _sym_or_none(ctx, 0, real_unit_eps(ring, a)),
            )
    elif case == "T32_ii":
        for j in range(1, p):
            rep.check(f"sym(1 + zeta^{j}) = 0", 0, _sym_or_none(ctx, 0, word_of(_one_plus_zeta(p, j))))
    else:
        rep.check("sym(p) = 0", 0, _sym_int(ctx, 0, p))
        for j in range(1, p):
            rep.check(
                f"sym(1 - zeta^{j}) = 0", 0, _sym_or_none(ctx, 0, word_of(_one_plus_zeta(p, j, -1)))
            )
    return rep


# -- witness searches --------------------------------------------------------

def _cj2_probe(args):
    p, u, v, q, policy = args
    if (p * u * v) % q == 0:
        return {"q": q, "skip": "q divides p*u*v"}
    pr = p_principality(q, p, policy)
    if pr is not Principality.PRINCIPAL:
        return {"q": q, "skip": f"principality {pr.value}"}
    ctx = build_context(p, q, u, v)
    try:
        fam = family_cj3(ctx)
    except EmptyFamily:
        # the Kummer extension is trivial, so every prime splits
        return {"q": q, "report": {"context": ctx.summary(), "family": "Cj3", "empty": True},
                "witness": False}
    report = is_totally_split(ctx, fam)
    nonzero = any(mu for mu in report.matrix.values())
    return {"q": q, "report": report.to_dict(), "witness": nonzero}


def witness_search_cj2(
    p: int, u: int, v: int, q_max: int, policy: Policy, jobs: int = 1
) -> WitnessResult:
    """First p-principal q whose prime ``(q, u xi - v)`` is not totally split."""
    if gcd(u, v) != 1:
        raise PreconditionError("gcd(u, v) must be 1")
    if policy.mode is PolicyMode.REGULAR and not is_regular(p).regular:
        raise PolicyMisuse(f"p={p} is irregular; automatic policy does not apply")
    qs = [q for q in primes_in(2, q_max) if q != p]
    outcomes = _first_hit(_cj2_probe, [(p, u, v, q, policy) for q in qs], lambda o: o.get("witness"), jobs)
    res = WitnessResult(found=False)
    for o in outcomes:
        if "skip" in o:
            log.info("skip q=%s: %s", o["q"], o["skip"])
            res.primes_skipped.append({"q": str(o["q"]), "reason": o["skip"]})
            continue
        res.primes_scanned += 1
        if o["witness"]:
            res.found, res.q, res.detail = True, o["q"], o["report"]
    return res


def _cj3_probe(args):
    p, q, policy = args
    pr = p_principality(q, p, policy)
    if pr is not Principality.PRINCIPAL:
        return {"q": q, "skip": f"principality {pr.value}"}
    f = mult_order(q, p)
    if pow(q, f, p * p) == 1:
        return {"q": q, "skip": "p not prime to kappa"}
    ns = [n for n in divisors(q - 1) if n > 2]
    if not ns:
        return {"q": q, "skip": "no n > 2 divides q - 1 (vacuous)"}
    subs = []
    witness = True
    for n in ns:
        for idx in range(len(units_mod(n))):
            ctx = build_context_free(p, q, n, idx)
            report = is_totally_split(ctx, family_cj3(ctx))
            split_rows = []
            for Q in range(len(ctx.Q_list)):
                row = [report.matrix.get((Q, g)) for g in range(p - 3)]
                if all(mu == 0 for mu in row):
                    split_rows.append(Q)
            if split_rows:
                witness = False
            subs.append({"n": n, "xi_index": idx, "xi_bar": str(ctx.xi_bar), "split_Q": split_rows,
                         "report": report.to_dict()})
            if not witness:
                break
        if not witness:
            break
    return {"q": q, "witness": witness, "subreports": subs}


def witness_search_cj3(p: int, q_max: int, policy: Policy, jobs: int = 1) -> WitnessResult:
    """First p-principal ``q = 3 mod 4`` with p prime to kappa and no split prime."""
    if p <= 3:
        raise PreconditionError("the cj3 search needs p > 3")
    if policy.mode is PolicyMode.REGULAR and not is_regular(p).regular:
        raise PolicyMisuse(f"p={p} is irregular; automatic policy does not apply")
    qs = [q for q in primes_in(3, q_max) if q % 4 == 3 and q != p]
    outcomes = _first_hit(_cj3_probe, [(p, q, policy) for q in qs], lambda o: o.get("witness"), jobs)
    res = WitnessResult(found=False)
    for o in outcomes:
        if "skip" in o:
            log.info("skip q=%s: %s", o["q"], o["skip"])
            res.primes_skipped.append({"q": str(o["q"]), "reason": o["skip"]})
            continue
        res.primes_scanned += 1
        if o["witness"]:
            res.found, res.q, res.detail = True, o["q"], o["subreports"]
    return res


def _crit_probe(args):
    p, q, m_values = args
    skipped = []
    splits = []
    cells = 0
    for n in divisors(q - 1):
        if n <= 2:
            skipped.append({"q": str(q), "n": n, "reason": "n <= 2"})
            continue
        for idx in range(len(units_mod(n))):
            ctx = build_context_free(p, q, n, idx)
            for m in m_values:
                cells += 1
                report = is_totally_split(ctx, family_crit_m(ctx, m))
                if report.totally_split:
                    splits.append({"q": str(q), "n": n, "xi_index": idx, "m": m})
    return {"q": q, "skipped": skipped, "splits": splits, "cells": cells}


def witness_search_crit(p: int, S: Sequence[int], m_values: Sequence[int], jobs: int = 1) -> WitnessResult:
    """Look for total splits of the criterion family over the user-supplied set S."""
    if not S:
        raise BadS("S must be nonempty")
    if is_regular(p).regular:
        return WitnessResult(
            found=False,
            detail={"marker": "p is regular; the criterion is vacuous", "criterion_satisfied": None},
        )
    for m in m_values:
        if not 1 <= m <= p - 1:
            raise BadM(f"m={m} outside 1..{p - 1}")
    qs = sorted(set(S))
    for q in qs:
        if q == p or not is_prime(q):
            raise BadS(f"S entry {q} is not a prime different from p")
    outcomes = ordered_map(_crit_probe, [(p, q, tuple(m_values)) for q in qs], jobs)
    res = WitnessResult(found=False)
    splits = []
    for o in outcomes:
        res.primes_scanned += 1
        res.primes_skipped.extend(o["skipped"])
        splits.extend(o["splits"])
    res.found = bool(splits)
    res.q = int(splits[0]["q"]) if splits else None
    res.detail = {
        "splits": splits,
        "criterion_satisfied": not splits,
        "cells": sum(o["cells"] for o in outcomes),
    }
    return res


# -- p = 3 scan --------------------------------------------------------------

def _p3_pair(args):
    s, t, q_max = args
    cand = p3_solutions(s, t)
    if not cand.accepted:
        return None
    u, v = cand.u, cand.v
    contexts = 0
    failures = []
    for q in primes_in(2, q_max):
        if (3 * u * v) % q == 0:
            continue
        ctx = build_context(3, q, u, v)
        contexts += 1
        ring = ctx.ring
        for k in (1, 2):
            if classify_unit(ctx.d, ctx.r, k, 3) is UnitClass.ZERO:
                continue
            w = word((int_embed(ring, u), 1), (vandiver_unit(ring, k), 1))
            for Q in range(len(ctx.Q_list)):
                try:
                    mu = residue_symbol(ctx, Q, w)
                except ZeroFactor:
                    mu = "ZeroFactor"
                if mu != 0:
                    failures.append({"q": str(q), "k": k, "Q": Q, "mu": mu})
        try:
            split = is_totally_split(ctx, family_thm1(ctx)).totally_split
        except EmptyFamily:
            split = True
        if not split:
            failures.append({"q": str(q), "family": "Thm1", "totally_split": False})
    return {"s": s, "t": t, "u": str(u), "v": str(v), "contexts": contexts, "failures": failures}


def scan_p3(s_max: int, q_max: int, jobs: int = 1) -> dict:
    """Check every p = 3 cube solution with ``|s|, |t| <= s_max`` at primes ``q <= q_max``."""
    grid = [
        (s, t, q_max)
        for s in range(-s_max, s_max + 1)
        for t in range(-s_max, s_max + 1)
        if gcd(s, t) == 1 and (s + t) % 3
    ]
    rows = [r for r in ordered_map(_p3_pair, grid, jobs) if r is not None]
    return {
        "pairs": len(rows),
        "contexts": sum(r["contexts"] for r in rows),
        "all_split": all(not r["failures"] for r in rows),
        "rows": rows,
    }
