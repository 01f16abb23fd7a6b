import decimal
import math
import random

import pytest
from gmpy2 import mpq

from gronwall.factored import (
    FactoredNumber,
    chebyshev_theta,
    g_expr,
    gronwall_g,
    log_n,
    nicolas_h,
    phi_ratio,
    sigma_ratio,
    structure_queries,
)
from gronwall.numeric import DomainError, Verdict, XReal, certified_compare, exp_gamma

from conftest import decimal_context, g_oracle, primes_below, sigma_brute


def dec_near(x: XReal, oracle, tol=mpq(1, 10**60)) -> bool:
    v = mpq(format(oracle, "f"))
    return x.lo <= v + tol and x.hi >= v - tol


# -- representation ------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 12, 5040, 10080, 2**40, 3 * 5 * 7 * 11 * 13, 999983 * 2])
def test_int_round_trip(n):
    f = FactoredNumber.from_int(n)
    assert f.to_int() == n
    assert FactoredNumber.parse(str(f)) == f
    assert FactoredNumber.parse(str(n)) == f


def test_parse_runs():
    f = FactoredNumber.parse("2^4 * 3^2 * [5..13]^1")
    assert f.to_int() == 16 * 9 * 5 * 7 * 11 * 13
    assert f.exponents() == {2: 4, 3: 2, 5: 1, 7: 1, 11: 1, 13: 1}
    assert str(f) == "2^4 * 3^2 * [5..13]^1"


def test_short_runs_print_individually():
    assert str(FactoredNumber.from_int(10080)) == "2^5 * 3^2 * 5 * 7"


def test_segments_merge_and_validate():
    f = FactoredNumber(((1, 2, 3), (1, 5, 7)))
    assert f.segments == ((1, 2, 7),)
    with pytest.raises(ValueError):
        FactoredNumber(((1, 4, 7),))
    with pytest.raises(ValueError):
        FactoredNumber(((1, 5, 7), (1, 2, 3)))
    with pytest.raises(ValueError):
        FactoredNumber.parse("2^3 * [2..5]")


def test_primorial_and_counts():
    assert FactoredNumber.primorial(4).to_int() == 210
    f = FactoredNumber.from_exponent_counts([4, 2, 1])
    assert f.to_int() == 2**3 * 3**2 * 5 * 7


def test_multiply_and_divide():
    a, b = FactoredNumber.from_int(360), FactoredNumber.from_int(77)
    assert (a * b).to_int() == 360 * 77
    assert (a * b).divide(b) == a
    with pytest.raises(ValueError):
        b.divide(a)


def test_hardy_ramanujan_shape():
    assert FactoredNumber.from_int(10080).is_hardy_ramanujan()
    assert not FactoredNumber.from_int(2 * 5).is_hardy_ramanujan()
    assert not FactoredNumber.from_int(2 * 27).is_hardy_ramanujan()


def test_giant_operations_stay_symbolic():
    big = FactoredNumber.parse("2^10 * 3^5 * [5..999983]^1")
    assert big.largest_prime() == 999983
    assert big.distinct_primes() == 78498
    with pytest.raises(OverflowError):
        FactoredNumber.parse("[2..999983]^300").to_int()


# -- exact ratios --------------------------------------------------------------


def test_sigma_ratio_matches_divisor_sums():
    for n in range(1, 3000):
        assert sigma_ratio(n) == mpq(sigma_brute(n), n)


def test_phi_ratio():
    assert phi_ratio(12) == mpq(4, 12)
    assert phi_ratio(FactoredNumber.primorial(3)) == mpq(8, 30)


# -- logs and theta --------------------------------------------------------------------


def test_theta_small_values():
    t10 = chebyshev_theta(10, 128)
    assert t10.contains(mpq(0)) is False
    ctx = decimal_context(80)
    assert dec_near(t10, ctx.ln(decimal.Decimal(210)))


def test_theta_100_against_decimal_sum():
    ctx = decimal_context(80)
    oracle = decimal.Decimal(0)
    for p in primes_below(100):
        oracle = ctx.add(oracle, ctx.ln(decimal.Decimal(p)))
    t = chebyshev_theta(100, 200)
    assert dec_near(t, oracle)
    lo, hi = t.to_floats()
    assert 83.72 < lo < hi < 83.73


def test_theta_domain():
    with pytest.raises(DomainError):
        chebyshev_theta(1, 64)


def test_log_n_of_giant_matches_theta():
    # log N_k = theta(p_k)
    n = FactoredNumber.primorial(78498)
    a, b = log_n(n, 128), chebyshev_theta(999983, 128)
    assert a.lo <= b.hi and b.lo <= a.hi


def test_log_n_random_against_decimal():
    rng = random.Random(3)
    ctx = decimal_context(80)
    for _ in range(200):
        n = rng.randrange(2, 10**15)
        assert dec_near(log_n(n, 256), ctx.ln(decimal.Decimal(n)))


def test_log_n_rejects_one():
    with pytest.raises(DomainError, match="log log domain"):
        log_n(1, 64)


# -- G and H ------------------------------------------------------------------------------


def test_g_5040():
    g = gronwall_g(5040, 64)
    assert g.sigma_over_n == mpq(19344, 5040)
    lo, hi = g.g.to_floats()
    assert abs(lo - 1.7910) < 1e-3 and abs(hi - 1.7910) < 1e-3
    assert certified_compare(g_expr(5040), ">", exp_gamma).verdict is Verdict.HOLDS


def test_g_of_two_is_negative():
    lo, hi = gronwall_g(2, 64).g.to_floats()
    assert -4.1 < lo < hi < -4.09


@pytest.mark.parametrize("n", [3, 4, 6, 9, 10080, 55440, 720720, 2**30 + 3])
def test_g_against_decimal_oracle(n):
    assert dec_near(g_expr(n)(512), g_oracle(n))


def test_g_undefined_at_one():
    with pytest.raises(DomainError, match="G undefined"):
        gronwall_g(1, 64)


def test_nicolas_h():
    lo, hi = nicolas_h(2, 64).to_floats()
    assert abs(lo - 5.144) < 1e-2
    lo, hi = nicolas_h(3, 64).to_floats()
    assert abs(lo - 3.0634) < 1e-3
    with pytest.raises(DomainError):
        nicolas_h(1, 64)


def test_nicolas_h_oracle():
    ctx = decimal_context(80)
    D = decimal.Decimal
    for j in (2, 5, 20):
        ps = primes_below(200)[:j]
        ratio = ctx.divide(D(math.prod(ps)), D(math.prod(p - 1 for p in ps)))
        theta = D(0)
        for p in ps:
            theta = ctx.add(theta, ctx.ln(D(p)))
        assert dec_near(nicolas_h(j, 256), ctx.divide(ratio, ctx.ln(theta)))


# -- structure --------------------------------------------------------------------------


def test_structure_queries_10080():
    s = structure_queries(10080)
    assert (s.largest_prime, s.exponent_of_largest, s.q, s.is_even, s.k) == (7, 1, 3, True, 4)
    assert s.divisible_by_primorial and s.hardy_ramanujan


def test_structure_squarefree_has_no_q():
    s = structure_queries(30)
    assert s.q is None
    assert structure_queries(2 * 251).divisible_by_primorial is False
