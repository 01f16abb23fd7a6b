"""Exact rationals, certified interval reals and the constants gamma, e^gamma.

Interval endpoints are MPFR numbers (``mantissa * 2**exp``), produced by
correctly rounded operations in directed rounding mode: lower endpoints are
rounded toward -inf, upper endpoints toward +inf.  Every comparison in the
package goes through :func:`certified_compare`, which only answers when the
two enclosures are disjoint.
"""

from __future__ import annotations

import enum
import functools
import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from . import _constants

QExact = mpq
"""Exact rational; always reduced with positive denominator."""

DEFAULT_LADDER: tuple[int, ...] = (64, 256, 1024, 4096)
MIN_PRECISION = 16
# 10**-DIGITS must stay below one ulp of the stored constants
MAX_CONSTANT_PRECISION = int(_constants.DIGITS * math.log2(10)) - 8


class Verdict(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INDETERMINATE = "Indeterminate"
    NOT_APPLICABLE = "NotApplicable"

    def __str__(self) -> str:
        return self.value


class DomainError(ValueError):
    pass


class ConstantExhausted(ValueError):
    pass


def ladder_from_env(default: Sequence[int] = DEFAULT_LADDER) -> tuple[int, ...]:
    """Precision ladder from ``GRONWALL_LADDER`` (comma separated bits)."""
    raw = os.environ.get("GRONWALL_LADDER")
    if not raw:
        return tuple(default)
    return parse_ladder(raw)


def parse_ladder(text: str) -> tuple[int, ...]:
    ladder = tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    check_ladder(ladder)
    return ladder


def check_ladder(ladder: Sequence[int]) -> None:
    if not ladder:
        raise ValueError("precision ladder must be nonempty")
    if any(b < MIN_PRECISION for b in ladder):
        raise ValueError(f"precision below {MIN_PRECISION} bits")
    if any(b >= c for b, c in zip(ladder, ladder[1:])):
        raise ValueError("precision ladder must be strictly increasing")


@functools.lru_cache(maxsize=None)
def _down(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundDown)


@functools.lru_cache(maxsize=None)
def _up(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundUp)


Number = Union[int, mpz, mpq]


@dataclass(frozen=True)
class XReal:
    """Closed interval ``[lo, hi]`` with dyadic endpoints."""

    lo: mpfr
    hi: mpfr
    precision_bits: int

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value: Number, precision_bits: int) -> XReal:
        """Tightest enclosure of a rational at the given precision."""
        q = mpq(value)
        num, den = q.numerator, q.denominator
        if den == 1:
            return cls(_down(precision_bits).add(num, 0), _up(precision_bits).add(num, 0), precision_bits)
        return cls(_down(precision_bits).div(num, den), _up(precision_bits).div(num, den), precision_bits)

    @classmethod
    def ratio(cls, num: int, den: int, precision_bits: int) -> XReal:
        """Enclosure of ``num/den`` without reducing the fraction first."""
        if den <= 0:
            raise ValueError("denominator must be positive")
        num, den = mpz(num), mpz(den)
        return cls(_down(precision_bits).div(num, den), _up(precision_bits).div(num, den), precision_bits)

    @classmethod
    def point(cls, x: mpfr, precision_bits: int) -> XReal:
        return cls(_down(precision_bits).add(x, 0), _up(precision_bits).add(x, 0), precision_bits)

    # -- inspection -----------------------------------------------------

    @property
    def width(self) -> mpfr:
        return _up(self.precision_bits).sub(self.hi, self.lo)

    @property
    def mid(self) -> mpfr:
        ctx = gmpy2.context(precision=self.precision_bits + 2)
        return ctx.div(ctx.add(self.lo, self.hi), 2)

    def contains(self, value) -> bool:
        """Membership test; ``value`` may be an int, mpq, mpfr or Decimal string."""
        if isinstance(value, str):
            value = mpq(value)
        return self.lo <= value <= self.hi

    def is_subset(self, other: XReal) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersect(self, other: XReal) -> XReal:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint enclosures of the same quantity")
        return XReal(lo, hi, max(self.precision_bits, other.precision_bits))

    def __repr__(self) -> str:
        return f"XReal([{self.lo}, {self.hi}], {self.precision_bits} bits)"

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> XReal:
        if isinstance(other, XReal):
            return other
        return XReal.exact(other, self.precision_bits)

    def __add__(self, other) -> XReal:
        o = self._coerce(other)
        p = max(self.precision_bits, o.precision_bits)
        return XReal(_down(p).add(self.lo, o.lo), _up(p).add(self.hi, o.hi), p)

    __radd__ = __add__

    def __sub__(self, other) -> XReal:
        o = self._coerce(other)
        p = max(self.precision_bits, o.precision_bits)
        return XReal(_down(p).sub(self.lo, o.hi), _up(p).sub(self.hi, o.lo), p)

    def __rsub__(self, other) -> XReal:
        return self._coerce(other) - self

    def __neg__(self) -> XReal:
        return XReal(-self.hi, -self.lo, self.precision_bits)

    def __mul__(self, other) -> XReal:
        o = self._coerce(other)
        p = max(self.precision_bits, o.precision_bits)
        d, u = _down(p), _up(p)
        if self.lo >= 0 and o.lo >= 0:
            return XReal(d.mul(self.lo, o.lo), u.mul(self.hi, o.hi), p)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return XReal(min(d.mul(a, b) for a, b in pairs), max(u.mul(a, b) for a, b in pairs), p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> XReal:
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise DomainError("division by an interval containing 0")
        p = max(self.precision_bits, o.precision_bits)
        d, u = _down(p), _up(p)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return XReal(min(d.div(a, b) for a, b in pairs), max(u.div(a, b) for a, b in pairs), p)

    def __rtruediv__(self, other) -> XReal:
        return self._coerce(other) / self

    def log(self) -> XReal:
        if self.lo <= 0:
            raise DomainError("log domain: interval touches or crosses 0")
        p = self.precision_bits
        return XReal(_down(p).log(self.lo), _up(p).log(self.hi), p)

    def log1p(self) -> XReal:
        """log(1 + x); accurate when x is tiny."""
        if self.lo <= -1:
            raise DomainError("log domain: 1 + x must be positive")
        p = self.precision_bits
        return XReal(_down(p).log1p(self.lo), _up(p).log1p(self.hi), p)

    def exp(self) -> XReal:
        p = self.precision_bits
        return XReal(_down(p).exp(self.lo), _up(p).exp(self.hi), p)

    def sqrt(self) -> XReal:
        if self.lo < 0:
            raise DomainError("sqrt of a negative interval")
        p = self.precision_bits
        return XReal(_down(p).sqrt(self.lo), _up(p).sqrt(self.hi), p)

    def to_floats(self) -> tuple[float, float]:
        """Outward-rounded binary64 endpoints (still an enclosure)."""
        return float(_down(53).add(self.lo, 0)), float(_up(53).add(self.hi, 0))


def _stored_constant(literal: str, precision_bits: int) -> XReal:
    if precision_bits < MIN_PRECISION:
        raise ValueError(f"precision_bits must be >= {MIN_PRECISION}")
    if precision_bits > MAX_CONSTANT_PRECISION:
        raise ConstantExhausted(
            f"constant exhausted: {precision_bits} bits requested, "
            f"stored digits support {MAX_CONSTANT_PRECISION}"
        )
    head, frac = literal.split(".")
    scale = mpz(10) ** len(frac)
    truncated = mpz(head + frac)
    return XReal(
        _down(precision_bits).div(truncated, scale),
        _up(precision_bits).div(truncated + 1, scale),
        precision_bits,
    )


@functools.lru_cache(maxsize=64)
def euler_gamma(precision_bits: int) -> XReal:
    """Enclosure of gamma of width at most ``2**(1 - precision_bits)``."""
    return _stored_constant(_constants.EULER_GAMMA, precision_bits)


@functools.lru_cache(maxsize=64)
def exp_gamma(precision_bits: int) -> XReal:
    """Enclosure of e^gamma taken from the stored literal."""
    return _stored_constant(_constants.EXP_EULER_GAMMA, precision_bits)


def xreal_log(x: XReal | Number, precision_bits: int | None = None) -> XReal:
    """Outward-rounded natural logarithm."""
    if isinstance(x, XReal):
        if precision_bits is not None and precision_bits != x.precision_bits:
            x = XReal(x.lo, x.hi, precision_bits)
        return x.log()
    if precision_bits is None:
        raise TypeError("precision_bits is required for exact arguments")
    q = mpq(x)
    if q <= 0:
        raise DomainError("log domain: argument must be positive")
    if q == 1:
        return XReal(mpfr(0), mpfr(0), precision_bits)
    # log is monotone, so log of the rational's own enclosure is an enclosure
    return XReal.exact(q, precision_bits).log()


# -- certified comparison ---------------------------------------------------

Expr = Union[XReal, Callable[[int], XReal]]

_RELATIONS = ("<", "<=", ">", ">=")


@dataclass(frozen=True)
class Comparison:
    verdict: Verdict
    lhs: XReal
    rhs: XReal
    precision_bits: int

    def margin(self) -> tuple[mpfr, mpfr]:
        """Certified bounds on ``lhs - rhs``."""
        diff = self.lhs - self.rhs
        return diff.lo, diff.hi


def _evaluate(expr: Expr, prec: int) -> XReal:
    return expr(prec) if callable(expr) else expr


def _decide(a: XReal, rel: str, b: XReal) -> Verdict | None:
    if a.hi < b.lo:
        return Verdict.HOLDS if rel in ("<", "<=") else Verdict.FAILS
    if a.lo > b.hi:
        return Verdict.HOLDS if rel in (">", ">=") else Verdict.FAILS
    if a.lo == a.hi == b.lo == b.hi:
        return Verdict.HOLDS if rel in ("<=", ">=") else Verdict.FAILS
    if rel == "<=" and a.hi <= b.lo:
        return Verdict.HOLDS
    if rel == ">=" and a.lo >= b.hi:
        return Verdict.HOLDS
    return None


def certified_compare(
    lhs: Expr,
    rel: str,
    rhs: Expr,
    ladder: Sequence[int] = DEFAULT_LADDER,
) -> Comparison:
    """Decide ``lhs rel rhs`` from disjoint enclosures.

    ``lhs``/``rhs`` are either fixed intervals or callables mapping a
    precision in bits to an enclosure; callables are re-evaluated along the
    ladder while the enclosures overlap.  Successive enclosures of the same
    expression are intersected, so refinement never widens them.
    """
    if rel not in _RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    check_ladder(ladder)
    a = b = None
    prec = ladder[0]
    for prec in ladder:
        na, nb = _evaluate(lhs, prec), _evaluate(rhs, prec)
        a = na if a is None else a.intersect(na)
        b = nb if b is None else b.intersect(nb)
        verdict = _decide(a, rel, b)
        if verdict is not None:
            return Comparison(verdict, a, b, prec)
        if not callable(lhs) and not callable(rhs):
            break
    return Comparison(Verdict.INDETERMINATE, a, b, prec)


def combine(verdicts: Sequence[Verdict]) -> Verdict:
    """Conjunction of verdicts: any Fails wins, then Indeterminate."""
    if any(v is Verdict.FAILS for v in verdicts):
        return Verdict.FAILS
    if any(v is Verdict.INDETERMINATE for v in verdicts):
        return Verdict.INDETERMINATE
    if verdicts and all(v is Verdict.NOT_APPLICABLE for v in verdicts):
        return Verdict.NOT_APPLICABLE
    return Verdict.HOLDS
