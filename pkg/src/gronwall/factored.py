"""Factored integers and the arithmetic functions evaluated on them.

A :class:`FactoredNumber` is a run-length encoding over consecutive primes:
the segment ``(a, lo, hi)`` means every prime in ``[lo, hi]`` divides the
number exactly ``a`` times.  Primorial-like giants with a million distinct
primes therefore cost a handful of segments.
"""

from __future__ import annotations

import functools
import math
import re
import threading
from dataclasses import dataclass
from typing import Iterator, Mapping

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .numeric import DomainError, XReal, _down, _up
from .primes import factor_int, is_prime, table

Segment = tuple[int, int, int]

# runs this short are printed prime by prime
_SHORT_RUN = 3
# segments this short have their logs summed directly, not via theta prefixes
_DIRECT_LOG_RUN = 8
# to_int() refuses beyond this many bits
MAX_INT_BITS = 1 << 24


def _normalize(segments) -> tuple[Segment, ...]:
    t = table()
    out: list[list[int]] = []
    for a, lo, hi in segments:
        if a == 0:
            continue
        if out and out[-1][0] == a and t.next_after(out[-1][2]) == lo:
            out[-1][2] = hi
        else:
            out.append([a, lo, hi])
    return tuple((a, lo, hi) for a, lo, hi in out)


@dataclass(frozen=True)
class FactoredNumber:
    """Positive integer as ordered (exponent, prime_lo, prime_hi) runs."""

    segments: tuple[Segment, ...] = ()

    def __post_init__(self) -> None:
        segs = tuple(tuple(int(v) for v in s) for s in self.segments)
        prev_hi = 1
        for a, lo, hi in segs:
            if a < 1:
                raise ValueError(f"exponent must be positive in segment {(a, lo, hi)}")
            if not lo <= hi or lo <= prev_hi:
                raise ValueError("segments must be ordered and disjoint")
            if not (is_prime(lo) and is_prime(hi)):
                raise ValueError(f"segment bounds must be prime: {(lo, hi)}")
            prev_hi = hi
        object.__setattr__(self, "segments", _normalize(segs))

    # -- construction ---------------------------------------------------

    @classmethod
    def one(cls) -> FactoredNumber:
        return cls(())

    @classmethod
    def from_exponents(cls, exps: Mapping[int, int]) -> FactoredNumber:
        return cls(tuple((a, p, p) for p, a in sorted(exps.items()) if a))

    @classmethod
    def from_int(cls, n: int) -> FactoredNumber:
        if n < 1:
            raise ValueError("FactoredNumber represents integers >= 1")
        return cls.from_exponents(factor_int(int(n)))

    @classmethod
    def primorial(cls, k: int) -> FactoredNumber:
        """N_k, the product of the first k primes."""
        if k == 0:
            return cls.one()
        return cls(((1, 2, table().nth(k)),))

    @classmethod
    def from_exponent_counts(cls, counts: list[int]) -> FactoredNumber:
        """Number whose first ``counts[e-1]`` primes have exponent >= e.

        ``counts`` must be non-increasing; this builds the Hardy-Ramanujan
        shape ``N_{counts[0]} * N_{counts[1]} * ...`` without normalizing.
        """
        t = table()
        segs = []
        top = len(counts)
        for e in range(top, 0, -1):
            start = counts[e] if e < top else 0
            stop = counts[e - 1]
            if stop > start:
                segs.append((e, t.nth(start + 1), t.nth(stop)))
        obj = object.__new__(cls)
        object.__setattr__(obj, "segments", tuple(segs))
        return obj

    @classmethod
    def parse(cls, text: str) -> FactoredNumber:
        """Parse ``2^4 * 3^2 * [5..7]^1`` style text, or a plain integer."""
        s = text.strip()
        if re.fullmatch(r"\d+", s):
            return cls.from_int(int(s))
        segs = []
        for term in s.split("*"):
            term = term.strip()
            m = re.fullmatch(r"\[\s*(\d+)\s*\.\.\s*(\d+)\s*\](?:\s*\^\s*(\d+))?", term)
            if m:
                lo, hi = int(m[1]), int(m[2])
                a = int(m[3]) if m[3] else 1
            else:
                m = re.fullmatch(r"(\d+)(?:\s*\^\s*(\d+))?", term)
                if not m:
                    raise ValueError(f"cannot parse factor {term!r}")
                lo = hi = int(m[1])
                a = int(m[2]) if m[2] else 1
            if lo == 1 and hi == 1:
                continue
            segs.append((a, lo, hi))
        merged = sorted(segs, key=lambda s: s[1])
        for x, y in zip(merged, merged[1:]):
            if y[1] <= x[2]:
                raise ValueError(f"overlapping factors in {text!r}")
        return cls(tuple(merged))

    def __str__(self) -> str:
        if not self.segments:
            return "1"
        t = table()
        parts = []
        for a, lo, hi in self.segments:
            run = t.slice(lo, hi) if hi <= t.cap else None
            if run is not None and len(run) <= _SHORT_RUN:
                parts.extend(str(p) if a == 1 else f"{p}^{a}" for p in run)
            elif lo == hi:
                parts.append(str(lo) if a == 1 else f"{lo}^{a}")
            else:
                parts.append(f"[{lo}..{hi}]^{a}")
        return " * ".join(parts)

    # -- structure ------------------------------------------------------

    def __iter__(self) -> Iterator[tuple[int, int]]:
        """Yield ``(prime, exponent)`` in increasing prime order."""
        t = table()
        for a, lo, hi in self.segments:
            if lo == hi:
                yield lo, a
            else:
                for p in t.slice(lo, hi):
                    yield p, a

    def exponents(self) -> dict[int, int]:
        return dict(iter(self))

    @property
    def is_one(self) -> bool:
        return not self.segments

    def distinct_primes(self) -> int:
        t = table()
        return sum(1 if lo == hi else t.pi(hi) - t.pi(lo) + 1 for _, lo, hi in self.segments)

    def largest_prime(self) -> int:
        if not self.segments:
            raise DomainError("1 has no prime factors")
        return self.segments[-1][2]

    def exponent_of(self, p: int) -> int:
        for a, lo, hi in self.segments:
            if lo <= p <= hi:
                return a if is_prime(p) else 0
        return 0

    def bit_length_bound(self) -> float:
        """Cheap float estimate of log2(n), for size guards only."""
        total = 0.0
        t = table()
        for a, lo, hi in self.segments:
            if lo == hi:
                total += a * math.log2(lo)
            else:
                total += a * sum(math.log2(p) for p in t.slice(lo, hi))
        return total

    def to_int(self) -> int:
        if self.bit_length_bound() > MAX_INT_BITS:
            raise OverflowError("number too large to materialize as an integer")
        return int(_product_tree([mpz(p) ** a for p, a in self]))

    def __int__(self) -> int:
        return self.to_int()

    def _index_runs(self):
        t = table()
        for a, lo, hi in self.segments:
            yield a, t.index(lo), t.index(hi)

    def _combine(self, other: FactoredNumber, sign: int) -> FactoredNumber:
        t = table()
        runs = [(a, i, j) for a, i, j in self._index_runs()]
        runs += [(sign * a, i, j) for a, i, j in other._index_runs()]
        cuts = sorted({i for _, i, _ in runs} | {j + 1 for _, _, j in runs})
        segs = []
        for start, stop in zip(cuts, cuts[1:]):
            a = sum(e for e, i, j in runs if i <= start and stop - 1 <= j)
            if a < 0:
                raise ValueError("division leaves a fractional result")
            if a:
                segs.append((a, t.nth(start + 1), t.nth(stop)))
        return FactoredNumber(tuple(segs))

    def __mul__(self, other) -> FactoredNumber:
        if isinstance(other, int):
            other = FactoredNumber.from_int(other)
        return self._combine(other, 1)

    __rmul__ = __mul__

    def divide(self, other) -> FactoredNumber:
        if isinstance(other, int):
            other = FactoredNumber.from_int(other)
        return self._combine(other, -1)

    def is_hardy_ramanujan(self) -> bool:
        """Primes are 2, 3, ..., p_k consecutively with non-increasing exponents."""
        if not self.segments:
            return True
        t = table()
        expected, prev_a = 2, None
        for a, lo, hi in self.segments:
            if lo != expected or (prev_a is not None and a > prev_a):
                return False
            expected, prev_a = t.next_after(hi), a
        return True


def _product_tree(values: list) -> mpz:
    if not values:
        return mpz(1)
    vals = list(values)
    while len(vals) > 1:
        nxt = [vals[i] * vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return mpz(vals[0])


def as_factored(n) -> FactoredNumber:
    if isinstance(n, FactoredNumber):
        return n
    if isinstance(n, str):
        return FactoredNumber.parse(n)
    return FactoredNumber.from_int(int(n))


# -- exact ratios -------------------------------------------------------------


def sigma_num_den(n: FactoredNumber) -> tuple[mpz, mpz]:
    """Unreduced numerator and denominator of sigma(n)/n."""
    nums, dens = [], []
    for p, a in n:
        p = mpz(p)
        nums.append(p ** (a + 1) - 1)
        dens.append(p**a * (p - 1))
    return _product_tree(nums), _product_tree(dens)


def sigma_ratio(n) -> mpq:
    """Exact sigma(n)/n, computed multiplicatively."""
    num, den = sigma_num_den(as_factored(n))
    return mpq(num, den)


def phi_ratio(n) -> mpq:
    """Exact phi(n)/n = prod (1 - 1/p)."""
    ps = [mpz(p) for p, _ in as_factored(n)]
    return mpq(_product_tree([p - 1 for p in ps]), _product_tree(ps))


# -- theta tables -------------------------------------------------------------


class _ThetaPrefix:
    """Outward-rounded prefix sums of log p over the prime table."""

    def __init__(self, prec: int):
        self.prec = prec
        self.log_lo: list[mpfr] = []
        self.log_hi: list[mpfr] = []
        self.sum_lo: list[mpfr] = [mpfr(0)]
        self.sum_hi: list[mpfr] = [mpfr(0)]
        self._lock = threading.Lock()

    def extend(self, count: int) -> None:
        if count <= len(self.log_lo):
            return
        t = table()
        t.nth(count)
        with self._lock:
            d, u = _down(self.prec), _up(self.prec)
            have = len(self.log_lo)
            primes = t.primes_upto(t.nth(count))[have:count]
            slo, shi = self.sum_lo[-1], self.sum_hi[-1]
            for p in primes:
                lo, hi = d.log(p), u.log(p)
                self.log_lo.append(lo)
                self.log_hi.append(hi)
                slo, shi = d.add(slo, lo), u.add(shi, hi)
                self.sum_lo.append(slo)
                self.sum_hi.append(shi)

    def theta_count(self, count: int) -> XReal:
        """Sum of log p over the first ``count`` primes."""
        self.extend(count)
        return XReal(self.sum_lo[count], self.sum_hi[count], self.prec)

    def log_prime(self, index: int) -> XReal:
        self.extend(index + 1)
        return XReal(self.log_lo[index], self.log_hi[index], self.prec)


@functools.lru_cache(maxsize=None)
def theta_prefix(prec: int) -> _ThetaPrefix:
    return _ThetaPrefix(prec)


def chebyshev_theta(x, precision_bits: int) -> XReal:
    """Certified theta(x) = sum of log p over primes p <= x, by sieved summation."""
    if x < 2:
        raise DomainError("theta needs x >= 2")
    count = table().pi(int(x))
    return theta_prefix(precision_bits).theta_count(count)


def log_n(n, precision_bits: int) -> XReal:
    """Certified log n from the factorisation."""
    n = as_factored(n)
    if n.is_one:
        raise DomainError("log log domain downstream: n must be >= 2")
    t = table()
    tp = theta_prefix(precision_bits)
    total = XReal(mpfr(0), mpfr(0), precision_bits)
    for a, lo, hi in n.segments:
        if lo == hi:  # single primes need no table lookup, even beyond the sieve cap
            part = XReal.exact(lo, precision_bits).log()
            total = total + (part if a == 1 else part * a)
            continue
        i, j = t.index(lo), t.index(hi)
        if j - i < _DIRECT_LOG_RUN:
            part = tp.log_prime(i)
            for k in range(i + 1, j + 1):
                part = part + tp.log_prime(k)
        else:
            part = tp.theta_count(j + 1) - tp.theta_count(i)
        total = total + (part if a == 1 else part * a)
    return total


# -- Gronwall and Nicolas ---------------------------------------------------------


@dataclass(frozen=True)
class GValue:
    sigma_over_n: mpq
    loglog_n: XReal
    g: XReal


def gronwall_g(n, precision_bits: int) -> GValue:
    """Certified G(n) = sigma(n) / (n log log n); G(2) is negative."""
    n = as_factored(n)
    if n.is_one:
        raise DomainError("G undefined for n < 2")
    ratio = sigma_ratio(n)
    loglog = log_n(n, precision_bits).log()
    return GValue(ratio, loglog, XReal.exact(ratio, precision_bits) / loglog)


def g_expr(n):
    """Callable precision -> enclosure of G(n), sharing the exact sigma ratio."""
    n = as_factored(n)
    if n.is_one:
        raise DomainError("G undefined for n < 2")
    ratio = sigma_ratio(n)

    def at(prec: int) -> XReal:
        return XReal.exact(ratio, prec) / log_n(n, prec).log()

    return at


def g_of_int(n: int, sigma: int, precision_bits: int) -> XReal:
    """G(n) for a native integer whose sigma(n) is already known."""
    if n < 2:
        raise DomainError("G undefined for n < 2")
    loglog = XReal.exact(n, precision_bits).log().log()
    return XReal.ratio(sigma, n, precision_bits) / loglog


@functools.lru_cache(maxsize=4096)
def _primorial_over_phi(j: int) -> mpq:
    ps = [mpz(p) for p in table().primes_upto(table().nth(j))]
    return mpq(_product_tree(ps), _product_tree([p - 1 for p in ps]))


def nicolas_h(j: int, precision_bits: int) -> XReal:
    """Certified H_j = N_j / (phi(N_j) log log N_j)."""
    if j < 2:
        raise DomainError("Nicolas' H_j is stated for j >= 2 (log log N_1 < 0)")
    ratio = _primorial_over_phi(j)
    loglog = theta_prefix(precision_bits).theta_count(j).log()
    return XReal.exact(ratio, precision_bits) / loglog


# -- structure ------------------------------------------------------------------


@dataclass(frozen=True)
class Structure:
    largest_prime: int
    exponent_of_largest: int
    q: int | None
    is_even: bool
    k: int
    divisible_by_primorial: bool
    hardy_ramanujan: bool


def structure_queries(n) -> Structure:
    """Exact structural facts: P(n), its exponent, q (largest p with p^2 | n)..."""
    n = as_factored(n)
    if n.is_one:
        raise DomainError("structure queries need n >= 2")
    a_last, _, p = n.segments[-1]
    q = None
    for a, lo, hi in reversed(n.segments):
        if a >= 2:
            q = hi
            break
    k = table().pi(p) if p <= table().cap else None
    return Structure(
        largest_prime=p,
        exponent_of_largest=a_last,
        q=q,
        is_even=n.segments[0][1] == 2,
        k=k,
        divisible_by_primorial=n.segments[0][1] == 2 and n.distinct_primes() == k,
        hardy_ramanujan=n.is_hardy_ramanujan(),
    )
