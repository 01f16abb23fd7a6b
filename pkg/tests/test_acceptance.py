"""Acceptance criteria, one test each; the terminal summary prints a PASS/FAIL line per criterion."""

import decimal
import random
import time

import pytest
from gmpy2 import mpq

from gronwall.abundance import STRUCTURED_LOG_CAP, enum_sa_bruteforce, enum_sa_structured, sa_structured_ints
from gronwall.audit import audit_lemma, equivalence_test_prime_square, probe_chain
from gronwall.classify import UNREFUTED, check_extraordinary
from gronwall.factored import g_expr, nicolas_h
from gronwall.numeric import Verdict, certified_compare, exp_gamma
from gronwall.primes import is_prime, sieve
from gronwall.scan import scan_nicolas, scan_robin

from conftest import decimal_context, g_oracle
from test_numeric import _random_expression, near

crit = pytest.mark.criterion


@crit(1, "Robin scan over (5040, 10^7] is clean")
def test_robin_desk_scale():
    t0 = time.perf_counter()
    report = scan_robin(5041, 10**7)
    elapsed = time.perf_counter() - t0
    assert report.checksum == 10**7 - 5040
    assert not report.violations and not report.indeterminates
    assert elapsed < 300


@crit(2, "n = 5040 is a certified violation with G(5040) near 1.7910")
def test_robin_boundary():
    report = scan_robin(5040, 5040)
    (f,) = report.violations
    assert f.n == 5040
    assert certified_compare(g_expr(5040), ">", exp_gamma).verdict is Verdict.HOLDS
    oracle = float(g_oracle(5040, 60))
    lo, hi = f.value.to_floats()
    assert lo <= oracle <= hi
    assert abs(lo - 1.7910) <= 1e-3 and abs(hi - 1.7910) <= 1e-3


@crit(3, "Nicolas scan to j = 1000 is clean and H_2 is near 5.144")
def test_nicolas():
    report = scan_nicolas(1000)
    assert not report.violations and not report.indeterminates
    ctx = decimal_context(60)
    h2 = ctx.divide(decimal.Decimal(3), ctx.ln(ctx.ln(decimal.Decimal(6))))
    lo, hi = nicolas_h(2, 64).to_floats()
    assert lo <= float(h2) <= hi
    assert abs(lo - 5.144) <= 1e-2 and abs(hi - 5.144) <= 1e-2


@crit(4, "structured SA enumeration equals brute force on [1, 10^6]")
def test_sa_oracle(sa_brute_1e6):
    brute = [int(r.n) for r in sa_brute_1e6]
    structured = [int(r.n) for r in enum_sa_structured(10**6)]
    assert set(structured) == set(brute)
    assert brute[:9] == [1, 2, 4, 6, 12, 24, 36, 48, 60]
    assert 10080 in brute


@crit(5, "Lemma 1 holds on every brute-force SA record above 36")
def test_lemma1(sa_brute_1e6):
    report = audit_lemma(1, sa_brute_1e6)
    assert report.applicable == len([r for r in sa_brute_1e6 if int(r.n) > 36]) > 0
    assert not report.fails and not report.indeterminate


@crit(6, "every CA record is an SA record")
def test_ca_inside_sa(ca_records):
    inside = [r for r in ca_records if r.log_n is None or r.log_n.hi < STRUCTURED_LOG_CAP]
    assert len(inside) > 50
    top = max(int(r.n) for r in inside)
    sa = {n for n, _, _ in sa_structured_ints(top)}
    assert all(int(r.n) in sa for r in inside)


@crit(7, "Lemma 4 holds on CA records with p_k >= 1530 up to 10^6")
def test_lemma4(ca_records):
    report = audit_lemma(4, ca_records)
    assert report.applicable > 0
    assert not report.fails and not report.indeterminate
    assert report.min_margin is not None and report.min_margin > 0


@crit(8, "Lemmas 3 and 5 hold on CA records with p_k > 20000")
def test_lemma3_and_lemma5(ca_records):
    l3 = audit_lemma(3, ca_records)
    l5 = audit_lemma(5, ca_records)
    assert l3.applicable > 0 and l5.applicable > 0
    assert not l3.fails, f"Lemma 3 fails on {len(l3.fails)} records"
    assert not l5.fails, f"Lemma 5 fails on {len(l5.fails)} of {l5.applicable} records, min margin {l5.min_margin}"


@crit(9, "G(mp) >= G(mp^2) agrees with its reformulation on 500 random pairs")
def test_prime_square_equivalence():
    rng = random.Random(500)
    primes = [p for p in range(2, 1000) if is_prime(p)]
    certified = 0
    while certified < 500:
        p = rng.choice(primes)
        m = rng.randrange(1, 10**6 // p + 1)
        if m % p == 0 or m * p <= 2:
            continue
        direct, reform = equivalence_test_prime_square(m, p)
        if Verdict.INDETERMINATE in (direct, reform):
            continue
        assert direct is reform, (m, p)
        certified += 1


@crit(10, "G(2w) < e^gamma for every prime w in [251, 10^4]")
def test_remark():
    ws = [w for w in sieve(10**4).tolist() if w >= 251]
    assert ws[0] == 251
    for w in ws:
        assert certified_compare(g_expr(2 * w), "<", exp_gamma).verdict is Verdict.HOLDS, w


@crit(11, "4 is GA1 and unrefuted GA2 to 10^4; primes fail GA1")
def test_ga_classification():
    st = check_extraordinary(4, 10**4)
    assert st.ga1 is Verdict.HOLDS
    assert st.ga2.status == UNREFUTED and st.ga2.bound == 10**4
    for p in sieve(2000).tolist():
        assert check_extraordinary(p, 10).ga1 is Verdict.FAILS


@crit(12, "probe-chain on 10080 is deterministic and S9 is the first failing step")
def test_chain_diagnostics():
    a, b = probe_chain(10080), probe_chain(10080)
    assert a.dumps() == b.dumps()
    assert abs(a.step("S2").rhs.to_floats()[0] - 9.2184) < 1e-3
    assert a.premises["p"] == 7
    assert a.step("S9").verdict is Verdict.FAILS
    assert a.first_fails() == "S9", f"first certified Fails is {a.first_fails()}"


@crit(13, "interval arithmetic is sound and exact rationals match cross-multiplication")
def test_numeric_soundness():
    rng = random.Random(13)
    for _ in range(10**3):
        build, oracle = _random_expression(rng)
        running = None
        for prec in (64, 128, 256, 512):
            x = build(prec)
            assert near(x, oracle)
            narrower = x if running is None else running.intersect(x)
            assert running is None or narrower.width <= running.width
            running = narrower
    mismatches = 0
    for _ in range(10**5):
        a, c = rng.randrange(-10**40, 10**40), rng.randrange(-10**40, 10**40)
        b, d = rng.randrange(1, 10**40), rng.randrange(1, 10**40)
        mismatches += (mpq(a, b) < mpq(c, d)) != (a * d < c * b)
        mismatches += (mpq(a, b) == mpq(c, d)) != (a * d == c * b)
    assert mismatches == 0
