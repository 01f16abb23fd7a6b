import pytest

from gronwall.classify import (
    FILTERED,
    REFUTED,
    UNREFUTED,
    check_extraordinary,
    check_ga1,
    check_ga2_bounded,
)
from gronwall.factored import FactoredNumber, g_expr
from gronwall.numeric import DomainError, Verdict, certified_compare, exp_gamma
from gronwall.primes import factor_int, sieve

from conftest import g_oracle

EG = 1.7810724179901979852


def g_float(n: int) -> float:
    return float(g_oracle(n, 40))


def test_four_is_ga1_and_unrefuted():
    assert check_ga1(4) is Verdict.HOLDS
    r = check_ga2_bounded(4, 10**4)
    assert r.status == UNREFUTED and r.bound == 10**4
    st = check_extraordinary(4, 10**4)
    assert st.extraordinary and st.is_composite


def test_six_fails_ga1():
    assert check_ga1(6) is Verdict.FAILS


@pytest.mark.parametrize("p", [2, 3, 5, 97, 7919, 999983])
def test_primes_fail_ga1(p):
    assert check_ga1(p) is Verdict.FAILS
    assert not check_extraordinary(p, 10).is_composite


def test_nine_is_not_filtered():
    lo, hi = g_expr(9)(64).to_floats()
    assert abs(lo - 1.8347) < 1e-3
    r = check_ga2_bounded(9, 50)
    assert r.status != FILTERED


def test_ga1_against_brute_force():
    for n in range(4, 400):
        f = factor_int(n)
        if sum(f.values()) < 2:
            continue
        g = g_float(n)
        expected = all(g >= g_float(n // p) if n // p >= 2 else True for p in f)
        got = check_ga1(n)
        assert got is (Verdict.HOLDS if expected else Verdict.FAILS), n


def test_ga2_against_brute_force():
    for n in range(2, 120):
        r = check_ga2_bounded(n, 60)
        g = g_float(n)
        if g < EG:
            assert r.status == FILTERED, n
            continue
        refuting = [c for c in range(2, 61) if g_float(c * n) > g]
        if refuting:
            assert (r.status, r.multiplier) == (REFUTED, refuting[0]), n
        else:
            assert r.status == UNREFUTED, n


def test_5040_bounded_search():
    r = check_ga2_bounded(5040, 10)
    g = g_float(5040)
    refuting = [c for c in range(2, 11) if g_float(c * 5040) > g]
    assert r.status == (REFUTED if refuting else UNREFUTED)
    assert g_float(10080) < g


def test_ga2_monotone_in_bound():
    for n in (4, 9, 12, 24, 36, 720):
        small, large = check_ga2_bounded(n, 20), check_ga2_bounded(n, 400)
        if small.status == REFUTED:
            assert (large.status, large.multiplier) == (REFUTED, small.multiplier)
        if large.status == UNREFUTED:
            assert small.status == UNREFUTED


def test_two_w_is_filtered():
    for w in (251, 257, 1009, 9973):
        st = check_extraordinary(2 * w, 100)
        assert st.ga2.status == FILTERED and st.ga2.reason == "g_below_e_gamma"
        assert not st.extraordinary


def test_remark_all_primes_251_to_10000():
    for w in sieve(10**4).tolist():
        if w >= 251:
            assert certified_compare(g_expr(2 * w), "<", exp_gamma).verdict is Verdict.HOLDS, w


def test_filter_consistency():
    """A refuted n never also carries a clean filter plus all-holding comparisons."""
    for n in range(2, 300):
        r = check_ga2_bounded(n, 30)
        if r.status == REFUTED:
            assert r.comparisons[-1]["verdict"] == "Holds"
            assert certified_compare(g_expr(n), "<", exp_gamma).verdict is not Verdict.HOLDS


def test_flags_for_large_candidates_absent_at_desk_scale():
    for n in range(500, 2000, 7):
        st = check_extraordinary(n, 20)
        assert not st.extraordinary
        assert st.flags == {}


def test_giant_uses_smooth_multipliers():
    giant = FactoredNumber.parse("2^7 * 3^4 * 5^2 * 7^2 * [11..97]^1")
    st = check_extraordinary(giant, 200)
    assert st.ga1 in (Verdict.HOLDS, Verdict.FAILS)
    assert st.ga2.status in (REFUTED, UNREFUTED, FILTERED)
    assert "ga1" in st.to_json()["comparisons"]


def test_errors():
    with pytest.raises(DomainError):
        check_ga1(1)
    with pytest.raises(ValueError):
        check_ga2_bounded(4, 1)


@pytest.mark.parametrize("text", ["2^3 * 3^2 * [5..97]^1", "2^6 * 3^4 * [5..13]^2 * [17..199]^1", "[2..61]^1"])
def test_ga1_run_shortcut_matches_full_check(text):
    n = FactoredNumber.parse(text)
    full = []
    for p, _ in n:
        m = n.divide(FactoredNumber.from_exponents({p: 1}))
        full.append(certified_compare(g_expr(n), ">=", g_expr(m)).verdict)
    expected = Verdict.FAILS if Verdict.FAILS in full else Verdict.HOLDS
    assert check_ga1(n) is expected
