"""Radical families and Kummer total-splitting tests.

An unramified prime splits totally in ``M(alpha_1^(1/p), ...)`` exactly when
every radical generator has trivial p-th power residue symbol there, so a
split test is a matrix of symbols.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .cyc import (
    CycRing,
    RadicalWord,
    UnitClass,
    classify_unit,
    make,
    vandiver_unit,
    word,
    zeta,
)
from .errors import BadM, EmptyFamily, PreconditionError, ZeroFactor
from .symbols import SplitContext, residue_symbol


@dataclass(frozen=True)
class RadicalFamily:
    label: str
    generators: tuple[RadicalWord, ...]
    indices: tuple[int, ...]

    def __post_init__(self):
        if not self.generators:
            raise EmptyFamily(f"family {self.label} has no generators")

    def __len__(self):
        return len(self.generators)


@dataclass
class SplitReport:
    context: dict
    family: str
    matrix: dict = dc_field(default_factory=dict)
    skipped: list = dc_field(default_factory=list)
    totally_split: bool = False
    zero_factor: bool = False

    def rows(self, n_Q: int, n_gen: int) -> list[list]:
        return [[self.matrix.get((i, g)) for g in range(n_gen)] for i in range(n_Q)]

    def to_dict(self) -> dict:
        return {
            "context": self.context,
            "family": self.family,
            "matrix": [
                {"Q": i, "generator": g, "mu": mu} for (i, g), mu in sorted(self.matrix.items())
            ],
            "skipped": self.skipped,
            "totally_split": self.totally_split,
            "zero_factor": self.zero_factor,
        }


def _ratio(ring: CycRing, k: int) -> RadicalWord:
    return word((vandiver_unit(ring, k), 1), (vandiver_unit(ring, 1), -1))


def family_cj3(ctx: SplitContext) -> RadicalFamily:
    """``(1 + xi zeta^k) / (1 + xi zeta)`` for ``k = 2 .. p-2``."""
    ring = ctx.ring
    ks = tuple(range(2, ctx.p - 1))
    return RadicalFamily("Cj3", tuple(_ratio(ring, k) for k in ks), ks)


def family_thm1(ctx: SplitContext) -> RadicalFamily:
    """The Cj3 generators plus ``k = p-1`` unless ``1 + xi zeta^(p-1)`` is zero."""
    ring = ctx.ring
    ks = list(range(2, ctx.p - 1))
    if classify_unit(ctx.d, ctx.r, ctx.p - 1, ctx.p) is not UnitClass.ZERO:
        ks.append(ctx.p - 1)
    return RadicalFamily("Thm1", tuple(_ratio(ring, k) for k in ks), tuple(ks))


def family_crit_m(ctx: SplitContext, m: int) -> RadicalFamily:
    """``(1 + xi zeta^k) zeta^(-k^m) / ((1 + xi zeta) zeta^(-1))``, ``k = 2 .. p-2``."""
    p = ctx.p
    if m % p == 0:
        raise BadM(f"m={m} is divisible by p={p}")
    if not 1 <= m <= p - 1:
        raise BadM(f"m={m} outside 1..{p - 1}")
    ring = ctx.ring
    ks = tuple(range(2, p - 1))
    gens = []
    for k in ks:
        gens.append(
            word(
                (vandiver_unit(ring, k), 1),
                (zeta(ring), -(pow(k, m, p))),
                (vandiver_unit(ring, 1), -1),
                (zeta(ring), 1),
            )
        )
    return RadicalFamily(f"CritM({m})", tuple(gens), ks)


def family_c2(p: int) -> RadicalFamily:
    """``1 + zeta^j`` for ``j = 0 .. p-2`` (``j = 0`` is the rational 2)."""
    ring = CycRing(p, 1)
    js = tuple(range(0, p - 1))
    gens = tuple(RadicalWord(((make(ring, [(0, 0, 1), (0, j, 1)]), 1),)) for j in js)
    return RadicalFamily("C2", gens, js)


def family_c4(p: int) -> RadicalFamily:
    """``(1 - zeta^j) / (1 - zeta)`` for ``j = 2 .. p-1``."""
    ring = CycRing(p, 1)
    js = tuple(range(2, p))
    one_minus = lambda j: make(ring, [(0, 0, 1), (0, j, -1)])  # noqa: E731
    gens = tuple(word((one_minus(j), 1), (one_minus(1), -1)) for j in js)
    return RadicalFamily("C4", gens, js)


def is_totally_split(ctx: SplitContext, fam: RadicalFamily) -> SplitReport:
    report = SplitReport(context=ctx.summary(), family=fam.label)
    for i in range(len(ctx.Q_list)):
        for g, gen in enumerate(fam.generators):
            try:
                report.matrix[(i, g)] = residue_symbol(ctx, i, gen)
            except ZeroFactor as exc:
                report.zero_factor = True
                report.skipped.append(
                    {"Q": i, "generator": g, "reason": f"ZeroFactor at factor {exc.index}"}
                )
    report.totally_split = not report.zero_factor and all(
        mu == 0 for mu in report.matrix.values()
    )
    return report


class RowSpace:
    """Incremental row-reduced basis over Z/p."""

    def __init__(self, p: int):
        self.p = p
        self.basis: dict[int, list[int]] = {}

    def add(self, row: Sequence[int]) -> bool:
        """Insert ``row``; True when it raised the rank."""
        p = self.p
        v = [x % p for x in row]
        for piv, b in self.basis.items():
            c = v[piv]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, b)]
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            return False
        inv = pow(v[lead], -1, p)
        v = [x * inv % p for x in v]
        for piv, b in list(self.basis.items()):
            c = b[lead]
            if c:
                self.basis[piv] = [(x - c * y) % p for x, y in zip(b, v)]
        self.basis[lead] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.basis)


def rank_mod_p(rows: Iterable[Sequence[int]], p: int) -> int:
    """Rank over Z/p by Gaussian elimination."""
    space = RowSpace(p)
    for row in rows:
        space.add(row)
    return space.rank


def _symbol_rows(ctx: SplitContext, fam: RadicalFamily) -> list[list[int]]:
    rows = []
    for i in range(len(ctx.Q_list)):
        try:
            rows.append([residue_symbol(ctx, i, g) for g in fam.generators])
        except ZeroFactor:
            continue
    return rows


FAMILIES = {
    "thm1": family_thm1,
    "cj3": family_cj3,
}


def _family_for(ctx, family_spec):
    if callable(family_spec):
        return family_spec(ctx)
    if family_spec in FAMILIES:
        return FAMILIES[family_spec](ctx)
    if isinstance(family_spec, str) and family_spec.startswith("crit:"):
        return family_crit_m(ctx, int(family_spec.split(":", 1)[1]))
    if family_spec == "c2":
        return family_c2(ctx.p)
    if family_spec == "c4":
        return family_c4(ctx.p)
    raise PreconditionError(f"unknown family {family_spec!r}")


def rank_profile(p: int, family_spec, contexts: Sequence[SplitContext]) -> list[int]:
    """Running rank after each context (nondecreasing).

    Primes where some generator meets a factor contribute no row, and neither
    do contexts whose generator set differs from the first one (for instance
    Thm1 when ``1 + xi zeta^(p-1)`` vanishes).
    """
    if not contexts:
        raise PreconditionError("at least one context is required")
    space = RowSpace(p)
    profile = []
    columns = None
    for ctx in contexts:
        if ctx.p != p:
            raise PreconditionError(f"context has p={ctx.p}, expected {p}")
        try:
            fam = _family_for(ctx, family_spec)
        except EmptyFamily:
            fam = None
        if fam is not None and columns is None:
            columns = fam.indices
        if fam is not None and fam.indices == columns:
            for row in _symbol_rows(ctx, fam):
                space.add(row)
        profile.append(space.rank)
    if columns is None:
        raise EmptyFamily("the family is empty in every context")
    return profile


def radical_rank_lower_bound(p: int, family_spec, contexts: Sequence[SplitContext]) -> int:
    """Lower bound on the Kummer radical rank from symbol vectors."""
    return rank_profile(p, family_spec, contexts)[-1]
