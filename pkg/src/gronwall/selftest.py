"""Small-scale oracle cross-checks behind ``gronwall selftest``."""

from __future__ import annotations

import time
from typing import Callable, TextIO

from gmpy2 import mpq

from . import _fallback, kernels
from .abundance import enum_ca, enum_sa_bruteforce, enum_sa_structured
from .audit import equivalence_test_prime_square, probe_chain
from .classify import UNREFUTED, check_ga1, check_ga2_bounded
from .factored import g_expr, nicolas_h, sigma_ratio
from .numeric import Verdict, certified_compare, exp_gamma
from .primes import factor_int, is_prime, sieve
from .scan import scan_nicolas, scan_robin

# Integers n <= 5040 with sigma(n) >= e^gamma n log log n and log log n > 0
# (the classical list without n = 2, where log log 2 < 0 makes G(2) negative).
ROBIN_EXCEPTIONS = (
    3, 4, 5, 6, 8, 9, 10, 12, 16, 18, 20, 24, 30, 36, 48, 60, 72, 84,
    120, 180, 240, 360, 720, 840, 2520, 5040,
)


def _sigma_brute(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def _kernels_agree() -> bool:
    want = [_sigma_brute(n) for n in range(1, 3001)]
    for mod in (kernels, _fallback):
        if mod.sigma_segment(1, 3001).tolist() != want:
            return False
        if mod.sigma_segment(1000, 3001).tolist() != want[999:]:
            return False
    return True


def _primes_agree() -> bool:
    table = set(sieve(20000).tolist())
    return all(is_prime(n) == (n in table) for n in range(20001))


def _factoring() -> bool:
    for n in (2**61 - 1, (2**31 - 1) * (2**13 - 1), 10080, 600851475143):
        f = factor_int(n)
        prod = 1
        for p, a in f.items():
            prod *= p**a
        if prod != n or not all(is_prime(p) for p in f):
            return False
    return True


def _robin_boundary() -> bool:
    report = scan_robin(2, 6000)
    if tuple(f.n for f in report.violations) != ROBIN_EXCEPTIONS or report.indeterminates:
        return False
    g = g_expr(5040)(64)
    return g.lo > mpq(17900, 10000) and g.hi < mpq(17920, 10000)


def _robin_slice() -> bool:
    report = scan_robin(5041, 200000)
    return not report.violations and not report.indeterminates


def _nicolas() -> bool:
    h2 = nicolas_h(2, 64)
    return not scan_nicolas(200).violations and h2.lo > 5.13 and h2.hi < 5.16


def _sa_oracle() -> bool:
    brute = [int(r.n) for r in enum_sa_bruteforce(10**5)]
    structured = [int(r.n) for r in enum_sa_structured(10**5)]
    return brute == structured and brute[:9] == [1, 2, 4, 6, 12, 24, 36, 48, 60]


def _ca_inside_sa() -> bool:
    ca = enum_ca(200)
    bound = max(r.n.bit_length_bound() for r in ca)
    sa = {int(r.n) for r in enum_sa_structured(2 ** int(bound + 2))}
    return all(int(r.n) in sa for r in ca)


def _sa_ratio_records() -> bool:
    sa = enum_sa_bruteforce(5000)
    best = mpq(0)
    members = {int(r.n) for r in sa}
    for n in range(1, 5001):
        r = sigma_ratio(n)
        if (r > best) != (n in members):
            return False
        best = max(best, r)
    return True


def _classify() -> bool:
    if check_ga1(4) is not Verdict.HOLDS or check_ga1(6) is not Verdict.FAILS:
        return False
    if any(check_ga1(p) is not Verdict.FAILS for p in (2, 3, 5, 7, 97)):
        return False
    return check_ga2_bounded(4, 1000).status == UNREFUTED


def _remark() -> bool:
    for w in (251, 257, 997, 9973):
        if certified_compare(g_expr(2 * w), "<", exp_gamma).verdict is not Verdict.HOLDS:
            return False
    return True


def _chain() -> bool:
    a, b = probe_chain(10080).dumps(), probe_chain(10080).dumps()
    return a == b and probe_chain(10080).step("S9").verdict is Verdict.FAILS


def _prime_square() -> bool:
    pairs = [(6, 5), (1, 3), (2, 7), (12, 11), (35, 2), (1, 2 ** 13 - 1)]
    for m, p in pairs:
        d, r = equivalence_test_prime_square(m, p)
        if Verdict.INDETERMINATE not in (d, r) and d is not r:
            return False
    return True


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("sigma kernels vs divisor sums", _kernels_agree),
    ("primality vs sieve below 20000", _primes_agree),
    ("factoring round trip", _factoring),
    ("Robin exceptions up to 6000", _robin_boundary),
    ("Robin slice (5040, 200000]", _robin_slice),
    ("Nicolas j <= 200 and H_2", _nicolas),
    ("SA brute force vs structured to 1e5", _sa_oracle),
    ("SA records vs exact ratios to 5000", _sa_ratio_records),
    ("CA numbers are SA", _ca_inside_sa),
    ("GA1/GA2 small cases", _classify),
    ("2w below e^gamma", _remark),
    ("chain report determinism", _chain),
    ("G(mp) >= G(mp^2) vs its reformulation", _prime_square),
]


def run(out: TextIO) -> int:
    failed = 0
    for name, check in CHECKS:
        t0 = time.perf_counter()
        try:
            ok = check()
            detail = ""
        except Exception as exc:  # report, keep going
            ok, detail = False, f" ({type(exc).__name__}: {exc})"
        failed += not ok
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}  [{time.perf_counter() - t0:.2f}s]{detail}\n")
    out.write(f"{len(CHECKS) - failed}/{len(CHECKS)} checks passed (kernels: {kernels.BACKEND})\n")
    return 1 if failed else 0
