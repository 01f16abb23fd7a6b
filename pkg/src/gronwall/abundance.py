"""Superabundant (SA) and colossally abundant (CA) numbers.

Three enumerators:

* :func:`enum_sa_bruteforce` scans sigma(t)/t records over every t <= limit.
* :func:`enum_sa_structured` works prime by prime.  If n = m * r with m the
  p-smooth part of n, any p-smooth m' < m with sigma(m')/m' >= sigma(m)/m
  gives t = m' * r < n with sigma(t)/t >= sigma(n)/n.  So the p-smooth part
  of an SA number is itself a strict record among p-smooth numbers, and the
  records for the next prime only need to extend the current records.
* :func:`enum_ca` raises exponents in decreasing order of the breakpoints
  eps(p, a) = log(sigma(p^a) / (p sigma(p^(a-1)))) / log p, the epsilons at
  which the exponent of p in the maximiser of sigma(n)/n^(1+eps) drops.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from . import __version__, kernels
from .factored import FactoredNumber, log_n as factored_log_n, sigma_ratio, theta_prefix
from .numeric import DEFAULT_LADDER, Verdict, XReal, _down, certified_compare
from .primes import SieveCapExceeded, table

SCHEMA = "gronwall.abundance-records"
SCHEMA_VERSION = 1

BRUTE_FORCE_MAX = 10**7
STRUCTURED_LOG_CAP = 200 * math.log(10)
DEFAULT_CA_PRIME_CAP = 10**6
# sigma_ratio is written to JSONL only for numbers below this many bits
PERSIST_RATIO_BITS = 4096

STRUCTURED_LABEL = "SA-shape record-setter"


@dataclass(frozen=True)
class AbundanceRecord:
    n: FactoredNumber
    kind: str  # "SA" | "CA" | "both"
    largest_prime: int | None
    q_v: int | None
    log_n: XReal | None
    sigma_ratio: mpq | None
    g: XReal | None
    epsilon_lo: XReal | None = None
    epsilon_hi: XReal | None = None  # None means +infinity
    label: str | None = None

    def exact_sigma_ratio(self) -> mpq:
        return self.sigma_ratio if self.sigma_ratio is not None else sigma_ratio(self.n)

    def to_json(self) -> dict:
        def lo(x):
            return None if x is None else x.to_floats()[0]

        def hi(x):
            return None if x is None else x.to_floats()[1]

        ratio = self.sigma_ratio
        if ratio is None and (self.log_n is None or self.log_n.hi / math.log(2) <= PERSIST_RATIO_BITS):
            ratio = sigma_ratio(self.n)
        return {
            "n_factored": str(self.n),
            "kind": self.kind,
            "epsilon_lo": lo(self.epsilon_lo),
            "epsilon_hi": hi(self.epsilon_hi),
            "epsilon_lo_upper": hi(self.epsilon_lo),
            "epsilon_hi_lower": lo(self.epsilon_hi),
            "p_k": self.largest_prime,
            "q_v": self.q_v,
            "log_n_lo": lo(self.log_n),
            "log_n_hi": hi(self.log_n),
            "g_lo": lo(self.g),
            "g_hi": hi(self.g),
            "sigma_ratio": None if ratio is None else f"{ratio.numerator}/{ratio.denominator}",
            "label": self.label,
        }

    @classmethod
    def from_json(cls, d: dict) -> AbundanceRecord:
        def interval(lo, hi):
            if lo is None or hi is None:
                return None
            return XReal(mpfr(lo), mpfr(hi), 53)

        ratio = d.get("sigma_ratio")
        return cls(
            n=FactoredNumber.parse(d["n_factored"]),
            kind=d["kind"],
            largest_prime=d.get("p_k"),
            q_v=d.get("q_v"),
            log_n=interval(d.get("log_n_lo"), d.get("log_n_hi")),
            sigma_ratio=mpq(ratio) if ratio else None,
            g=interval(d.get("g_lo"), d.get("g_hi")),
            epsilon_lo=interval(d.get("epsilon_lo"), d.get("epsilon_lo_upper")),
            epsilon_hi=interval(d.get("epsilon_hi_lower"), d.get("epsilon_hi")),
            label=d.get("label"),
        )


def make_record(n: FactoredNumber, kind: str, *, ratio: mpq | None = None, label: str | None = None,
                precision_bits: int = 64) -> AbundanceRecord:
    if ratio is None:
        ratio = sigma_ratio(n)
    if n.is_one:
        return AbundanceRecord(n, kind, None, None, None, ratio, None, label=label)
    segs = n.segments
    q = next((hi for a, lo, hi in reversed(segs) if a >= 2), None)
    ln = factored_log_n(n, precision_bits)
    g = XReal.exact(ratio, precision_bits) / ln.log()
    return AbundanceRecord(n, kind, segs[-1][2], q, ln, ratio, g, label=label)


# -- SA -----------------------------------------------------------------------------


def enum_sa_bruteforce(limit: int, *, segment_size: int = 1 << 20) -> list[AbundanceRecord]:
    """Every s <= limit with sigma(s)/s > sigma(t)/t for all t < s."""
    if not 1 <= limit <= BRUTE_FORCE_MAX:
        raise ValueError(f"brute-force limit must be in [1, {BRUTE_FORCE_MAX}]")
    best_s, best_n = 0, 1
    hits = []
    for a in range(1, limit + 1, segment_size):
        b = min(a + segment_size, limit + 1)
        sig = kernels.sigma_segment(a, b)
        offs, best_s, best_n = kernels.sa_records(sig, a, best_s, best_n)
        hits.extend((a + int(o), int(sig[o])) for o in offs)
    return [make_record(FactoredNumber.from_int(n), "SA", ratio=mpq(s, n)) for n, s in hits]


def _limit_from_log(log_limit) -> int:
    if isinstance(log_limit, XReal):
        x = log_limit.lo
    else:
        x = mpfr(log_limit)
    bits = int(x / math.log(2)) + 64
    return int(gmpy2.floor(_down(bits).exp(x)))


def sa_structured_ints(limit: int) -> list[tuple[int, tuple[int, ...], mpq]]:
    """(n, exponents, sigma(n)/n) for every SA number n <= limit."""
    limit = mpz(limit)
    # (n, ratio, exponent tuple) for records among p-smooth numbers
    recs: list[tuple[mpz, mpq, tuple[int, ...]]] = [(mpz(1), mpq(1), ())]
    primorial = mpz(1)
    for p in _primes_forever():
        primorial *= p
        if primorial > limit:
            break
        cands = []
        for n, r, exps in recs:
            cands.append((n, r, exps))
            # p can only extend numbers that already use every smaller prime
            if len(exps) != _n_primes_before(p):
                continue
            amax = exps[-1] if exps else None
            m, pa, a = n, mpz(1), 0
            while amax is None or a < amax:
                m *= p
                pa *= p
                a += 1
                if m > limit:
                    break
                cands.append((m, r * mpq(pa * p - 1, pa * (p - 1)), exps + (a,)))
        cands.sort(key=lambda c: c[0])
        best = mpq(0)
        recs = []
        for c in cands:
            if c[1] > best:
                best = c[1]
                recs.append(c)
    return [(int(n), exps, r) for n, r, exps in recs]


def _primes_forever() -> Iterator[int]:
    t = table()
    k = 1
    while True:
        yield t.nth(k)
        k += 1


def _n_primes_before(p: int) -> int:
    return table().pi(p - 1) if p > 2 else 0


def enum_sa_structured(limit: int | None = None, *, log_limit=None,
                       log_cap: float = STRUCTURED_LOG_CAP) -> list[AbundanceRecord]:
    """SA numbers up to ``limit`` (or ``e**log_limit``) via smooth-record levels."""
    if (limit is None) == (log_limit is None):
        raise ValueError("give exactly one of limit, log_limit")
    if limit is None:
        upper = log_limit.hi if isinstance(log_limit, XReal) else log_limit
        if upper > log_cap:
            raise ValueError(f"log limit {upper} exceeds the structured cap {log_cap:.3f}")
        limit = _limit_from_log(log_limit)
    elif limit >= 1 and math.log(limit) > log_cap:
        raise ValueError(f"log limit {math.log(limit):.3f} exceeds the structured cap {log_cap:.3f}")
    out = []
    primes = table().primes_upto(1000)
    for n, exps, ratio in sa_structured_ints(limit):
        fn = FactoredNumber.from_exponents(dict(zip(primes, exps)))
        label = STRUCTURED_LABEL if n > BRUTE_FORCE_MAX else None
        out.append(make_record(fn, "SA", ratio=ratio, label=label))
    return out


# -- CA -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Breakpoint:
    eps: XReal
    p: int
    a: int
    index: int  # 0-based prime index of p
    log_gain: XReal  # log(sigma(p^a) / (p sigma(p^(a-1))))


def breakpoint_eps(p: int, a: int, precision_bits: int) -> tuple[XReal, XReal]:
    """(eps(p, a), log gain) enclosures; eps = log1p(delta)/log p."""
    p_ = mpz(p)
    delta = mpq(p_ - 1, p_ * (p_**a - 1))
    gain = XReal.exact(delta, precision_bits).log1p()
    idx = table().index(p)
    return gain / theta_prefix(precision_bits).log_prime(idx), gain


def _order_breakpoints(bps: list[Breakpoint], ladder: Sequence[int]) -> list[Breakpoint]:
    """Sort by decreasing eps, refining clusters whose enclosures overlap."""
    bps = sorted(bps, key=lambda b: (-b.eps.mid, b.p))
    i = 0
    while i < len(bps) - 1:
        if bps[i + 1].eps.hi < bps[i].eps.lo:
            i += 1
            continue
        j = i + 1
        while j + 1 < len(bps) and not bps[j + 1].eps.hi < bps[j].eps.lo:
            j += 1
        cluster = bps[i : j + 1]
        for prec in ladder[1:]:
            cluster = [Breakpoint(breakpoint_eps(b.p, b.a, prec)[0], b.p, b.a, b.index, b.log_gain)
                       for b in cluster]
            cluster.sort(key=lambda b: (-b.eps.mid, b.p))
            if all(y.eps.hi < x.eps.lo for x, y in zip(cluster, cluster[1:])):
                break
        else:
            # exact ties (if any): smaller prime is raised first
            cluster.sort(key=lambda b: (-b.eps.mid, b.p))
        bps[i : j + 1] = cluster
        i = j
    return bps


def ca_breakpoints(max_prime: int, precision_bits: int = 64,
                   ladder: Sequence[int] = DEFAULT_LADDER) -> tuple[list[Breakpoint], XReal]:
    """Ordered breakpoints down to the largest prime <= max_prime, plus the floor eps."""
    t = table()
    if max_prime < 2:
        raise ValueError("max_prime must be >= 2")
    if max_prime >= t.cap:
        raise SieveCapExceeded(f"extend sieve: CA enumeration to {max_prime} needs primes beyond {t.cap}")
    primes = t.primes_upto(max_prime)
    nxt = t.next_after(primes[-1])
    floor, _ = breakpoint_eps(nxt, 1, precision_bits)

    def above_floor(p: int, a: int) -> bool:
        cmp = certified_compare(lambda b: breakpoint_eps(p, a, b)[0], ">",
                                lambda b: breakpoint_eps(nxt, 1, b)[0], ladder)
        if cmp.verdict is Verdict.INDETERMINATE:
            raise ArithmeticError(f"cannot order eps({p},{a}) against the floor")
        return cmp.verdict is Verdict.HOLDS

    bps = []
    amax = None  # eps(p, a) decreases in p, so the admissible exponent only shrinks
    for idx, p in enumerate(primes):
        a = 1
        while amax is None or a <= amax:
            if a > 1 and not above_floor(p, a):
                break
            eps, gain = breakpoint_eps(p, a, precision_bits)
            bps.append(Breakpoint(eps, p, a, idx, gain))
            a += 1
        amax = a - 1
    return _order_breakpoints(bps, ladder), floor


def enum_ca(max_prime: int = DEFAULT_CA_PRIME_CAP, *, precision_bits: int = 64,
            ladder: Sequence[int] = DEFAULT_LADDER) -> list[AbundanceRecord]:
    """One record per CA number whose largest prime is <= max_prime.

    Record i is the maximiser of sigma(n)/n^(1+eps) for eps in
    [epsilon_lo, epsilon_hi]; at an endpoint both neighbours are CA.
    """
    t = table()
    bps, floor = ca_breakpoints(max_prime, precision_bits, ladder)
    tp = theta_prefix(precision_bits)
    zero = XReal(mpfr(0), mpfr(0), precision_bits)
    records = [AbundanceRecord(FactoredNumber.one(), "CA", None, None, None, mpq(1), None,
                               epsilon_lo=bps[0].eps if bps else floor, epsilon_hi=None)]
    counts: list[int] = []  # counts[e-1] = number of primes with exponent >= e
    log_n, log_sigma = zero, zero
    for i, bp in enumerate(bps):
        if bp.a - 1 == len(counts):
            counts.append(0)
        if counts[bp.a - 1] != bp.index:
            raise ArithmeticError(f"breakpoint order skips a prime at ({bp.p}, {bp.a})")
        counts[bp.a - 1] += 1
        log_n = log_n + tp.log_prime(bp.index)
        log_sigma = log_sigma + bp.log_gain
        g = log_sigma.exp() / log_n.log()
        records.append(AbundanceRecord(
            n=FactoredNumber.from_exponent_counts(list(counts)),
            kind="CA",
            largest_prime=t.nth(counts[0]),
            q_v=t.nth(counts[1]) if len(counts) > 1 and counts[1] else None,
            log_n=log_n,
            sigma_ratio=None,
            g=g,
            epsilon_lo=bps[i + 1].eps if i + 1 < len(bps) else floor,
            epsilon_hi=bp.eps,
        ))
    return records


# -- persistence -------------------------------------------------------------------


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def make_header(config: dict, relaxed_premises: Iterable[str] = ()) -> dict:
    return {
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config": config,
        "config_hash": config_hash(config),
        "relaxed_premises": list(relaxed_premises),
    }


def write_records(path: str | os.PathLike, records: Iterable[AbundanceRecord], config: dict) -> int:
    """Append records to a JSONL table, writing the schema header if the file is new."""
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    if not fresh:
        with open(path) as fh:
            _check_header(json.loads(fh.readline()))
    count = 0
    with open(path, "a") as fh:
        if fresh:
            fh.write(json.dumps(make_header(config)) + "\n")
        for rec in records:
            fh.write(json.dumps(rec.to_json()) + "\n")
            count += 1
    return count


def _check_header(header: dict) -> None:
    if header.get("schema") != SCHEMA:
        raise ValueError("not an abundance record table")
    if header.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {header.get('schema_version')}")


def read_records(path: str | os.PathLike) -> Iterator[AbundanceRecord]:
    """Stream records from a JSONL table (header validated, then skipped)."""
    with open(path) as fh:
        first = fh.readline()
        if not first:
            return
        _check_header(json.loads(first))
        for line in fh:
            if line.strip():
                yield AbundanceRecord.from_json(json.loads(line))
