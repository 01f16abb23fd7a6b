"""GA1 / GA2 classification and extraordinary-candidate status.

GA2 quantifies over every multiplier c, so only a bounded search is possible:
results are Refuted(c), UnrefutedUpTo(C) or FilteredOut(reason), never "GA2".
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq, mpz

from .factored import FactoredNumber, as_factored, log_n, sigma_num_den
from .numeric import (
    DEFAULT_LADDER,
    Comparison,
    DomainError,
    Verdict,
    XReal,
    certified_compare,
    exp_gamma,
)
from .primes import factor_int, table

log = logging.getLogger(__name__)

DEFAULT_MULTIPLIER_BOUND = 10**4
GIANT_MULTIPLIER_BOUND = 10**3
GIANT_BITS = 64  # beyond 2^64 multipliers are 97-smooth factored forms
SMOOTH_PRIME_MAX = 97
# runs with this many primes or fewer are checked prime by prime in GA1
_DIRECT_RUN = 8

REFUTED = "Refuted"
UNREFUTED = "UnrefutedUpTo"
FILTERED = "FilteredOut"
INDETERMINATE = "Indeterminate"


def _g_factor(p: int, a: int) -> mpq:
    """sigma(p^a) / p^a."""
    p = mpz(p)
    return mpq(p ** (a + 1) - 1, p**a * (p - 1))


class _GContext:
    """Shared exact sigma ratio and per-precision log n of one candidate."""

    def __init__(self, n: FactoredNumber):
        self.n = n
        self.num, self.den = sigma_num_den(n)
        self._log = {}

    def ratio(self, prec: int) -> XReal:
        return XReal.ratio(self.num, self.den, prec)

    def log_n(self, prec: int) -> XReal:
        if prec not in self._log:
            self._log[prec] = log_n(self.n, prec)
        return self._log[prec]

    def g(self, prec: int) -> XReal:
        return self.ratio(prec) / self.log_n(prec).log()

    def g_scaled(self, factor: mpq, log_shift, prec: int) -> XReal:
        """G of the number with sigma ratio times ``factor`` and log n plus ``log_shift``."""
        loglog = (self.log_n(prec) + log_shift(prec)).log()
        return self.ratio(prec) * XReal.exact(factor, prec) / loglog


def _comparison_json(label: str, cmp: Comparison) -> dict:
    lhs, rhs = cmp.lhs.to_floats(), cmp.rhs.to_floats()
    return {
        "check": label,
        "verdict": cmp.verdict.value,
        "lhs_lo": lhs[0],
        "lhs_hi": lhs[1],
        "rhs_lo": rhs[0],
        "rhs_hi": rhs[1],
        "precision_bits": cmp.precision_bits,
    }


def _is_composite(n: FactoredNumber) -> bool:
    return len(n.segments) > 1 or (n.segments[0][0] >= 2 or n.segments[0][1] != n.segments[0][2])


def _is_giant(n: FactoredNumber) -> bool:
    return n.bit_length_bound() > GIANT_BITS


# -- GA1 ---------------------------------------------------------------------


@dataclass
class GA1Result:
    verdict: Verdict
    comparisons: list[dict] = field(default_factory=list)


def _ga1_primes(n: FactoredNumber):
    """(p, a) pairs that must be compared.

    For a run of primes sharing exponent a, G(n/p) = G(n) * h(p) * L / L_p with
    h(p) = 1 - (p-1)/(p^(a+1)-1) increasing in p and L_p = log log(n/p) decreasing
    in p.  When every L_p is positive G(n/p) increases along the run, so its
    largest prime is the binding case.  Short runs are checked in full.
    """
    t = table()
    for a, lo, hi in n.segments:
        i, j = t.index(lo), t.index(hi)
        if j - i + 1 <= _DIRECT_RUN:
            for k in range(i, j + 1):
                yield t.nth(k + 1), a
        else:
            yield hi, a


def check_ga1_detail(n, ladder: Sequence[int] = DEFAULT_LADDER) -> GA1Result:
    n = as_factored(n)
    if n.is_one:
        raise DomainError("GA1 needs n >= 2")
    if not _is_composite(n):
        return GA1Result(Verdict.FAILS, [{"check": "composite", "verdict": Verdict.FAILS.value}])
    ctx = _GContext(n)
    verdicts, comps = [], []
    for p, a in _ga1_primes(n):
        factor = _g_factor(p, a - 1) / _g_factor(p, a)
        shift = lambda prec, p=p: -XReal.exact(p, prec).log()  # noqa: E731
        cmp = certified_compare(
            ctx.g, ">=", lambda prec, f=factor, s=shift: ctx.g_scaled(f, s, prec), ladder
        )
        verdicts.append(cmp.verdict)
        comps.append(_comparison_json(f"G(n) >= G(n/{p})", cmp))
        if cmp.verdict is Verdict.FAILS:
            break
    if Verdict.FAILS in verdicts:
        v = Verdict.FAILS
    elif Verdict.INDETERMINATE in verdicts:
        v = Verdict.INDETERMINATE
    else:
        v = Verdict.HOLDS
    return GA1Result(v, comps)


def check_ga1(n, ladder: Sequence[int] = DEFAULT_LADDER) -> Verdict:
    """Composite and certified G(n) >= G(n/p) for every prime p | n."""
    return check_ga1_detail(n, ladder).verdict


# -- GA2 ---------------------------------------------------------------------


@dataclass
class GA2Result:
    status: str
    multiplier: int | None = None
    bound: int | None = None
    reason: str | None = None
    comparisons: list[dict] = field(default_factory=list)

    def __str__(self) -> str:
        if self.status == REFUTED:
            return f"Refuted({self.multiplier})"
        if self.status == UNREFUTED:
            return f"UnrefutedUpTo({self.bound})"
        if self.status == FILTERED:
            return f"FilteredOut({self.reason})"
        return f"Indeterminate({self.multiplier})"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "multiplier": self.multiplier,
            "bound": self.bound,
            "reason": self.reason,
        }


def _smooth_multipliers(bound: int) -> list[int]:
    out = [1]
    for p in table().primes_upto(SMOOTH_PRIME_MAX):
        grown = []
        for c in out:
            c *= p
            while c <= bound:
                grown.append(c)
                c *= p
        out.extend(grown)
    return sorted(c for c in out if c >= 2)


def default_multiplier_bound(n) -> int:
    return GIANT_MULTIPLIER_BOUND if _is_giant(as_factored(n)) else DEFAULT_MULTIPLIER_BOUND


def _multiplier_factor(n: FactoredNumber, c: int) -> mpq:
    """(sigma(cn)/(cn)) / (sigma(n)/n)."""
    f = mpq(1)
    for q, b in factor_int(c).items():
        a = n.exponent_of(q)
        f *= _g_factor(q, a + b) / _g_factor(q, a)
    return f


def check_ga2_bounded(n, bound: int | None = None, ladder: Sequence[int] = DEFAULT_LADDER) -> GA2Result:
    """Search c = 2..C for a certified G(cn) > G(n) after the e^gamma filter.

    For n beyond 2^64 the multipliers are the 97-smooth c <= C.
    """
    n = as_factored(n)
    if n.is_one:
        raise DomainError("GA2 needs n >= 2")
    if bound is None:
        bound = default_multiplier_bound(n)
    if bound < 2:
        raise ValueError("multiplier bound must be >= 2")
    ctx = _GContext(n)
    filt = certified_compare(ctx.g, "<", exp_gamma, ladder)
    comps = [_comparison_json("G(n) < e^gamma", filt)]
    if filt.verdict is Verdict.HOLDS:
        return GA2Result(FILTERED, reason="g_below_e_gamma", comparisons=comps)
    multipliers = _smooth_multipliers(bound) if _is_giant(n) else range(2, bound + 1)
    first_unknown = None
    for c in multipliers:
        factor = _multiplier_factor(n, c)
        shift = lambda prec, c=c: XReal.exact(c, prec).log()  # noqa: E731
        cmp = certified_compare(
            lambda prec, f=factor, s=shift: ctx.g_scaled(f, s, prec), ">", ctx.g, ladder
        )
        if cmp.verdict is Verdict.HOLDS:
            comps.append(_comparison_json(f"G({c}n) > G(n)", cmp))
            return GA2Result(REFUTED, multiplier=c, bound=bound, comparisons=comps)
        if cmp.verdict is Verdict.INDETERMINATE and first_unknown is None:
            first_unknown = c
            comps.append(_comparison_json(f"G({c}n) > G(n)", cmp))
    if first_unknown is not None:
        return GA2Result(INDETERMINATE, multiplier=first_unknown, bound=bound, comparisons=comps)
    return GA2Result(UNREFUTED, bound=bound, comparisons=comps)


# -- combined ----------------------------------------------------------------


@dataclass
class GAStatus:
    n: FactoredNumber
    is_composite: bool
    ga1: Verdict
    ga2: GA2Result
    flags: dict = field(default_factory=dict)
    ga1_comparisons: list[dict] = field(default_factory=list)

    @property
    def extraordinary(self) -> bool:
        return self.ga1 is Verdict.HOLDS and self.ga2.status == UNREFUTED

    def to_json(self) -> dict:
        return {
            "n": str(self.n),
            "is_composite": self.is_composite,
            "ga1": self.ga1.value,
            "ga2": self.ga2.to_json(),
            "extraordinary": self.extraordinary,
            "flags": self.flags,
            "comparisons": {"ga1": self.ga1_comparisons, "ga2": self.ga2.comparisons},
        }


def _above_500(n: FactoredNumber) -> bool:
    return n.bit_length_bound() > GIANT_BITS or n.to_int() > 500


def check_extraordinary(n, bound: int | None = None, ladder: Sequence[int] = DEFAULT_LADDER) -> GAStatus:
    """GA1 and bounded GA2, with informational flags for candidates above 500."""
    n = as_factored(n)
    ga1 = check_ga1_detail(n, ladder)
    ga2 = check_ga2_bounded(n, bound, ladder)
    status = GAStatus(n, _is_composite(n), ga1.verdict, ga2, ga1_comparisons=ga1.comparisons)
    if status.extraordinary and _above_500(n):
        p = n.largest_prime()
        odd = n.segments[0][1] != 2
        below_log = certified_compare(XReal.exact(p, ladder[0]), "<", lambda prec: log_n(n, prec), ladder)
        status.flags = {
            "odd": odd,
            "largest_prime_below_log_n": below_log.verdict.value,
            "largest_prime_exponent_one": n.segments[-1][0] == 1,
        }
        if odd:
            log.warning("odd extraordinary candidate %s above 500: extraordinary numbers are even", n)
    return status
