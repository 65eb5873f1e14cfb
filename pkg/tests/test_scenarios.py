import logging

import pytest
from hypothesis import given, strategies as st

from cyclosplit.arith import cyclotomic_value
from cyclosplit.cyc import CycRing, make, word_of
from cyclosplit.errors import BadM, BadS, DividesPUV, PolicyMisuse, PreconditionError, WrongDivisor
from cyclosplit.scenarios import (
    Policy,
    PolicyMode,
    Principality,
    _exact_root,
    _first_hit,
    _shift_decomposition,
    ordered_map,
    p3_solutions,
    p_principality,
    parse_policy_table,
    pth_power_pairs,
    pth_power_pairs_shift,
    prime_divisors_upto,
    scan_p3,
    verify_corollary,
    verify_lemma_relation,
    verify_predicted_symbols,
    witness_search_cj2,
    witness_search_cj3,
    witness_search_crit,
)
from cyclosplit.symbols import build_context
from oracles import oracle_int_mu, oracle_mu_ctx


def _square(x):
    return x * x


# generators


def test_p3_solutions_examples():
    c = p3_solutions(3, 1)
    assert (c.u, c.v, c.accepted) == (19, 18, True)
    assert p3_solutions(1, 1).reason == "v = 0"
    assert p3_solutions(2, 1).reason == "gcd(u, v) = 3"
    assert (p3_solutions(3, 2).u, p3_solutions(3, 2).v) == (-1, 18)


@given(st.integers(-30, 30), st.integers(-30, 30))
def test_p3_solutions_are_cubes(s, t):
    # (s + t zeta)^3 with zeta^2 = -1 - zeta
    c = p3_solutions(s, t)
    assert c.u == s**3 + t**3 - 3 * s * t * t
    assert c.v == 3 * s * t * (s - t)
    if c.accepted:
        assert c.v % 3 == 0 and c.v != 0


def test_pth_power_pairs():
    pairs = pth_power_pairs(5, 2, range(-50, 51))
    assert len(pairs) == 50 and pairs[0] == (-49, 81)
    assert all(x + y == 32 and x % 2 for x, y in pairs)
    with pytest.raises(PreconditionError):
        pth_power_pairs(5, 0, range(3))


def test_pth_power_pairs_shift():
    pairs = pth_power_pairs_shift(5, 1, 1, range(-3, 4))
    assert pairs == [(-3, 628), (-2, 627), (-1, 626), (1, 624), (2, 623), (3, 622)]
    with pytest.raises(PreconditionError):
        pth_power_pairs_shift(5, 1, 5, range(3))


def test_root_helpers():
    assert _exact_root(-243, 5) == -3
    assert _exact_root(244, 5) is None
    assert _shift_decomposition(5**4 * 3**5, 5) == (1, 3)
    assert _shift_decomposition(5**5, 5) is None
    assert _shift_decomposition(0, 5) is None


def test_prime_divisors_upto():
    assert prime_divisors_upto(cyclotomic_value(5, -49, 81), 10**4) == [5, 401]
    assert prime_divisors_upto(2 * 10007, 10**4) == [2]
    assert prime_divisors_upto(0, 100) == []


# policies


def test_policy_table_parsing(tmp_path):
    text = "# q principal\n11 1\n31 0  # not principal\n\n41 1\n"
    assert parse_policy_table(text) == {11: True, 31: False, 41: True}
    with pytest.raises(PreconditionError):
        parse_policy_table("11 yes\n")
    path = tmp_path / "table.txt"
    path.write_text(text)
    pol = Policy.parse(f"table:{path}")
    assert pol.mode is PolicyMode.TABLE and pol.lookup(31) is False
    assert p_principality(11, 37, pol) is Principality.PRINCIPAL
    assert p_principality(31, 37, pol) is Principality.NOT_PRINCIPAL
    assert p_principality(43, 37, pol) is Principality.UNKNOWN
    with pytest.raises(OSError):
        Policy.parse(f"table:{tmp_path / 'missing'}")


def test_p_principality():
    assert p_principality(11, 7, Policy.regular()) is Principality.PRINCIPAL
    with pytest.raises(PolicyMisuse):
        p_principality(11, 37, Policy.regular())
    assert p_principality(11, 37, Policy.unknown()) is Principality.UNKNOWN
    with pytest.raises(PreconditionError):
        p_principality(7, 7, Policy.regular())
    with pytest.raises(PreconditionError):
        Policy.parse("sometimes")


# corollaries


def test_c2_at_three_records_failure():
    rep = verify_corollary("C2", 3, 19, 18, 13, Policy.regular())
    assert not rep.overall and not rep.probative
    first = rep.conditions[0]
    assert first["condition"] == "q = 1 mod p^2" and first["observed"] == "4" and not first["pass"]
    assert any("p > 3" in n for n in rep.notes)
    assert rep.to_dict()["overall"] is False


def test_corollary_divisor_checks():
    with pytest.raises(WrongDivisor):
        verify_corollary("C2", 3, 19, 18, 7, Policy.regular())
    with pytest.raises(WrongDivisor):
        verify_corollary("C6", 5, 1, 6, 11, Policy.regular())
    with pytest.raises(DividesPUV):
        verify_corollary("C3", 5, 7, 2, 5, Policy.regular())
    with pytest.raises(PreconditionError):
        verify_corollary("C9", 5, 1, 6, 101, Policy.regular())


def test_c4_conditions_match_oracle():
    p, u, v, q = 5, 1, 6, 101
    rep = verify_corollary("C4", p, u, v, q, Policy.regular())
    assert rep.probative
    ctx = build_context(p, q, u, v)
    su = oracle_int_mu(ctx, 0, u)
    by_name = {c["condition"].split(" at ")[0]: c for c in rep.conditions}
    assert by_name["q = 1 mod p^2"]["pass"]
    assert by_name["sym(v) = sym(u)"]["observed"] == str(oracle_int_mu(ctx, 0, v))
    assert by_name["sym(p) = sym(u)"]["observed"] == str(oracle_int_mu(ctx, 0, p))
    ring = CycRing(p, 1)
    for j in range(1, p):
        mu = oracle_mu_ctx(ctx, 0, word_of(make(ring, [(0, 0, 1), (0, j, -1)])))
        c = by_name[f"-sym(1 - zeta^{j}) = sym(u)"]
        assert c["observed"] == str(-mu % p) and c["expected"] == str(su)
    assert not rep.overall


def test_c3_and_c6_cover_every_prime():
    # q = 11 divides u - v = 11; q = 11 has f = 1 for p = 5, so four primes
    rep = verify_corollary("C3", 5, 14, 3, 11, Policy.regular())
    assert sum(c["condition"].startswith("sym(2)") for c in rep.conditions) == 4
    rep = verify_corollary("C6", 5, 9, 2, 11, Policy.regular())
    assert sum(c["condition"].startswith("sym(v) = sym(u)") for c in rep.conditions) == 4


def test_unknown_principality_is_not_probative():
    rep = verify_corollary("C4", 5, 1, 6, 101, Policy.unknown())
    assert not rep.probative and "Unknown" in rep.notes[0]


# lemma relations


@pytest.mark.parametrize("x,y,q", [(-49, 81, 401), (-47, 79, 11), (-41, 73, 31), (-39, 71, 151)])
def test_lemma_eps_examples(x, y, q):
    rep = verify_lemma_relation("eps", 5, x, y, q)
    assert rep.overall and len(rep.conditions) == 4


@pytest.mark.parametrize("x,y,q", [(-29, 654, 61), (-26, 651, 521), (-24, 649, 101)])
def test_lemma_shift_examples(x, y, q):
    assert verify_lemma_relation("eps_p_shift", 5, x, y, q).overall


@pytest.mark.parametrize("x,y,q", [(-50, 293, 191), (-49, 292, 41), (-46, 289, 2441)])
def test_lemma_varpi_examples(x, y, q):
    assert x + y == 3**5
    assert verify_lemma_relation("varpi", 5, x, y, q).overall


def test_lemma_preconditions():
    with pytest.raises(PreconditionError):
        verify_lemma_relation("eps", 5, 3, 5, 11)  # 8 is not a fifth power
    with pytest.raises(WrongDivisor):
        verify_lemma_relation("eps", 5, -49, 81, 7)
    with pytest.raises(PreconditionError):
        verify_lemma_relation("mystery", 5, -49, 81, 401)


# predicted symbols


def test_predicted_symbols_generic_data_fails():
    rep = verify_predicted_symbols("T32_ii", 5, -49, 81, 401)
    assert not rep.probative and len(rep.conditions) == 4
    assert not rep.overall
    rep = verify_predicted_symbols("T32_i", 7, 1, 2, 127)
    assert len(rep.conditions) == 4


def test_predicted_symbols_preconditions():
    with pytest.raises(WrongDivisor):
        verify_predicted_symbols("T31", 5, -49, 81, 401)
    with pytest.raises(PreconditionError):
        verify_predicted_symbols("T99", 5, -49, 81, 401)


# witness searches


def test_cj3_witness_at_five():
    res = witness_search_cj3(5, 100, Policy.regular())
    assert res.found and res.q == 11
    assert [s["reason"] for s in res.primes_skipped] == [
        "no n > 2 divides q - 1 (vacuous)",
        "p not prime to kappa",
    ]
    with pytest.raises(PreconditionError):
        witness_search_cj3(3, 100, Policy.regular())
    with pytest.raises(PolicyMisuse):
        witness_search_cj3(37, 100, Policy.regular())


def test_cj2_witness_and_logging(caplog):
    res = witness_search_cj2(5, 1, 5, 500, Policy.regular())
    assert res.found and res.q == 2 and res.primes_scanned == 1
    with caplog.at_level(logging.INFO, logger="cyclosplit.scenarios"):
        res = witness_search_cj2(5, 7, 5, 500, Policy.regular())
    assert res.found and all(s["reason"] == "q divides p*u*v" for s in res.primes_skipped)
    assert len(caplog.records) == len(res.primes_skipped)
    with pytest.raises(PreconditionError):
        witness_search_cj2(5, 2, 4, 100, Policy.regular())


def test_cj2_at_three_is_trivially_split():
    # u + zeta v = (3 + zeta)^3, so nothing can be a witness
    res = witness_search_cj2(3, 19, 18, 200, Policy.regular())
    assert not res.found and res.primes_scanned == 46 - 3  # p, and q = 2, 19 dividing puv


def test_cj2_empty_scan():
    res = witness_search_cj2(5, 3, 10, 2, Policy.regular())
    assert not res.found and res.primes_scanned + len(res.primes_skipped) <= 1


def test_crit_search():
    res = witness_search_crit(7, [29], [1])
    assert res.detail["criterion_satisfied"] is None and not res.found
    res = witness_search_crit(37, [149], [1, 2])
    assert res.primes_scanned == 1 and res.detail["cells"] > 0
    assert {s["n"] for s in res.primes_skipped} == {1, 2}
    assert res.detail["criterion_satisfied"] is (not res.found)
    with pytest.raises(BadS):
        witness_search_crit(37, [], [1])
    with pytest.raises(BadS):
        witness_search_crit(37, [150], [1])
    with pytest.raises(BadM):
        witness_search_crit(37, [149], [37])


def test_scan_p3_small():
    out = scan_p3(2, 60)
    assert out["all_split"] and out["pairs"] == len(out["rows"]) > 0


# parallel helpers


def test_ordered_map_is_order_preserving():
    items = list(range(40))
    assert ordered_map(_square, items, 1) == ordered_map(_square, items, 3) == [i * i for i in items]


def test_first_hit_prefix_does_not_depend_on_jobs():
    items = list(range(100))
    out = _first_hit(_square, items, lambda r: r == 49, 1)
    assert out[-1] == 49 and len(out) == 8
    out4 = _first_hit(_square, items, lambda r: r == 49, 4)
    assert out4 == out
