"""Lemma audits over enumerated records and the step-by-step proof-chain prober."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from . import __version__
from .abundance import STRUCTURED_LOG_CAP, AbundanceRecord, config_hash, sa_structured_ints
from .classify import GAStatus
from .factored import FactoredNumber, as_factored, chebyshev_theta, g_expr, log_n
from .numeric import DEFAULT_LADDER, Comparison, DomainError, Verdict, XReal, certified_compare, combine
from .primes import is_prime, next_prime, table

log = logging.getLogger(__name__)

LEMMA_IDS = (1, 2, 3, 4, 5)
LEMMA1_MIN_V = 36
LEMMA2_MIN_N = 500
LEMMA4_MIN_P = 1530
LEMMA35_MIN_P = 20000
Q_COEFF = mpq(998, 1000)

DEFAULT_N_FLOOR_LOG10 = 10**10
DEFAULT_P_FLOOR = 20000
DEFAULT_X_CAP = mpq(1, 100)


def _floats(x: XReal | None) -> tuple[float | None, float | None]:
    return (None, None) if x is None else x.to_floats()


# -- lemma audits --------------------------------------------------------------


@dataclass
class LemmaAuditReport:
    lemma_id: int
    records_checked: int = 0
    applicable: int = 0
    holds: int = 0
    fails: list[str] = field(default_factory=list)
    indeterminate: list[str] = field(default_factory=list)
    min_margin: float | None = None
    min_margin_at: str | None = None

    def note_margin(self, margin: float, where: str) -> None:
        if self.min_margin is None or margin < self.min_margin:
            self.min_margin, self.min_margin_at = margin, where

    def exit_code(self) -> int:
        if self.fails:
            return 1
        if self.indeterminate:
            return 3
        return 0

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma_id,
            "records_checked": self.records_checked,
            "applicable": self.applicable,
            "holds": self.holds,
            "fails": self.fails,
            "indeterminate": self.indeterminate,
            "min_margin": self.min_margin,
            "min_margin_at": self.min_margin_at,
        }


def _exceeds(n: FactoredNumber, bound: int, stored_log: XReal | None) -> bool:
    if stored_log is not None and stored_log.lo > math.log(bound) + 1e-9:
        return True
    if n.bit_length_bound() > 64:
        return True
    return n.to_int() > bound


def _log_v(rec: AbundanceRecord) -> Callable[[int], XReal]:
    """log v: the stored enclosure at the first rung, recomputed above it."""

    def at(prec: int) -> XReal:
        if rec.log_n is not None and prec <= rec.log_n.precision_bits + 11:
            return rec.log_n
        return log_n(rec.n, prec)

    return at


def _theta(p: int) -> Callable[[int], XReal]:
    return lambda prec: chebyshev_theta(p, prec)


def _primorial_divides(n: FactoredNumber) -> bool:
    """N_r | n for r = pi(P(n)): every prime up to P(n) divides n."""
    return n.segments[0][1] == 2 and n.distinct_primes() == table().pi(n.largest_prime())


def _theta_below_log(n: FactoredNumber, log_of_n, ladder) -> Comparison:
    """theta(P(n)) <= log n, settled exactly when N_r | n (equality for primorials)."""
    cmp = certified_compare(_theta(n.largest_prime()), "<=", log_of_n, ladder)
    if cmp.verdict is Verdict.INDETERMINATE and _primorial_divides(n):
        return Comparison(Verdict.HOLDS, cmp.lhs, cmp.rhs, cmp.precision_bits)
    return cmp


def _tally(report: LemmaAuditReport, verdict: Verdict, ref: str) -> None:
    if verdict is Verdict.HOLDS:
        report.holds += 1
    elif verdict is Verdict.FAILS:
        report.fails.append(ref)
    else:
        report.indeterminate.append(ref)


def _lemma1(rec: AbundanceRecord, report: LemmaAuditReport, ladder) -> None:
    n = rec.n
    if n.is_one or not _exceeds(n, LEMMA1_MIN_V, rec.log_n):
        return
    report.applicable += 1
    ok = n.is_hardy_ramanujan() and n.segments[-1][0] == 1
    _tally(report, Verdict.HOLDS if ok else Verdict.FAILS, str(n))


def _lemma3(rec: AbundanceRecord, report: LemmaAuditReport, ladder) -> None:
    p, q = rec.largest_prime, rec.q_v
    if p is None or p <= LEMMA35_MIN_P or q is None:
        return
    report.applicable += 1
    lv = _log_v(rec)
    cmp = certified_compare(_theta(p), "<", lambda prec: lv(prec) - XReal.exact(Q_COEFF * q, prec), ladder)
    _tally(report, cmp.verdict, str(rec.n))
    report.note_margin(-float(cmp.margin()[1]), str(rec.n))


def _lemma4(rec: AbundanceRecord, report: LemmaAuditReport, ladder) -> None:
    p, q = rec.largest_prime, rec.q_v
    if p is None or p < LEMMA4_MIN_P:
        return
    report.applicable += 1
    ok = q is not None and p < q * q < 2 * p
    _tally(report, Verdict.HOLDS if ok else Verdict.FAILS, str(rec.n))
    if q is not None:
        report.note_margin(min(q - math.sqrt(p), math.sqrt(2 * p) - q), str(rec.n))


def _lemma5(rec: AbundanceRecord, report: LemmaAuditReport, ladder) -> None:
    p = rec.largest_prime
    if p is None or p <= LEMMA35_MIN_P:
        return
    report.applicable += 1
    lv = _log_v(rec)
    low = _theta_below_log(rec.n, lv, ladder)
    high = certified_compare(lv, "<", _theta(table().next_after(p)), ladder)
    _tally(report, combine([low.verdict, high.verdict]), str(rec.n))
    # margin of the upper end: theta(p_{k+1}) - log v
    report.note_margin(-float(high.margin()[1]), str(rec.n))


_CHECKS = {1: _lemma1, 3: _lemma3, 4: _lemma4, 5: _lemma5}


def audit_lemma(lemma_id: int, records: Iterable, ladder: Sequence[int] = DEFAULT_LADDER) -> LemmaAuditReport:
    """Check one lemma on every applicable record of a stream.

    Lemma 2 (largest prime below log n, with exponent one) takes GAStatus
    objects, i.e. extraordinary candidates above 500;
    the others take AbundanceRecords.
    """
    if lemma_id not in LEMMA_IDS:
        raise ValueError(f"lemma must be one of {LEMMA_IDS}")
    report = LemmaAuditReport(lemma_id)
    for rec in records:
        report.records_checked += 1
        if lemma_id == 2:
            _lemma2(rec, report, ladder)
        else:
            _CHECKS[lemma_id](rec, report, ladder)
    if report.min_margin is not None:
        log.info("lemma %d: minimum margin %.6g at %s", lemma_id, report.min_margin, report.min_margin_at)
    return report


def _lemma2(status: GAStatus, report: LemmaAuditReport, ladder) -> None:
    n = status.n
    if not status.extraordinary or not _exceeds(n, LEMMA2_MIN_N, None):
        return
    report.applicable += 1
    p = n.largest_prime()
    cmp = certified_compare(XReal.exact(p, ladder[0]), "<", lambda prec: log_n(n, prec), ladder)
    exp_one = Verdict.HOLDS if n.segments[-1][0] == 1 else Verdict.FAILS
    _tally(report, combine([cmp.verdict, exp_one]), str(n))


# -- proof-chain prober --------------------------------------------------------


@dataclass(frozen=True)
class Thresholds:
    n_floor_log10: int = DEFAULT_N_FLOOR_LOG10
    p_floor: int = DEFAULT_P_FLOOR
    x_cap: mpq = DEFAULT_X_CAP

    def to_json(self) -> dict:
        return {
            "n_floor_log10": self.n_floor_log10,
            "p_floor": self.p_floor,
            "x_cap": f"{self.x_cap.numerator}/{self.x_cap.denominator}",
        }


@dataclass
class Step:
    id: str
    statement: str
    verdict: Verdict
    lhs: XReal | None = None
    rhs: XReal | None = None
    checks: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        lhs, rhs = _floats(self.lhs), _floats(self.rhs)
        d = {
            "id": self.id,
            "statement": self.statement,
            "verdict": self.verdict.value,
            "lhs_lo": lhs[0],
            "lhs_hi": lhs[1],
            "rhs_lo": rhs[0],
            "rhs_hi": rhs[1],
        }
        if self.checks:
            d["checks"] = self.checks
        return d


def _check(label: str, cmp: Comparison) -> dict:
    lhs, rhs = _floats(cmp.lhs), _floats(cmp.rhs)
    return {"check": label, "verdict": cmp.verdict.value, "lhs_lo": lhs[0], "lhs_hi": lhs[1],
            "rhs_lo": rhs[0], "rhs_hi": rhs[1]}


def _na_check(label: str, reason: str) -> dict:
    return {"check": label, "verdict": Verdict.NOT_APPLICABLE.value, "reason": reason}


@dataclass
class ChainReport:
    candidate: FactoredNumber
    thresholds: Thresholds
    ladder: tuple[int, ...]
    premises: dict
    relaxed_premises: list[str]
    steps: list[Step]
    implication_violations: list[str] = field(default_factory=list)

    def step(self, step_id: str) -> Step:
        return next(s for s in self.steps if s.id == step_id)

    def first_fails(self) -> str | None:
        return next((s.id for s in self.steps if s.verdict is Verdict.FAILS), None)

    def exit_code(self) -> int:
        verdicts = [s.verdict for s in self.steps]
        if Verdict.FAILS in verdicts:
            return 1
        if Verdict.INDETERMINATE in verdicts:
            return 3
        return 0

    def to_json(self) -> dict:
        config = {"thresholds": self.thresholds.to_json(), "ladder": list(self.ladder)}
        return {
            "tool_version": __version__,
            "config": config,
            "config_hash": config_hash(config),
            "candidate": str(self.candidate),
            "relaxed_premises": self.relaxed_premises,
            "premises": self.premises,
            "steps": [s.to_json() for s in self.steps],
            "implication_violations": self.implication_violations,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def _sa_membership(n: FactoredNumber) -> tuple[Verdict, str]:
    if not n.is_hardy_ramanujan():
        return Verdict.FAILS, "exponents are not non-increasing over consecutive primes"
    if n.bit_length_bound() * math.log(2) > STRUCTURED_LOG_CAP:
        return Verdict.NOT_APPLICABLE, "outside the enumerated range"
    v = n.to_int()
    members = {m for m, _, _ in sa_structured_ints(v)}
    return (Verdict.HOLDS, "found in enumeration") if v in members else (Verdict.FAILS, "not a record")


def _exact_int_step(step_id: str, statement: str, ok: bool, lhs: int, rhs: int, prec: int) -> Step:
    return Step(step_id, statement, Verdict.HOLDS if ok else Verdict.FAILS,
                XReal.exact(lhs, prec), XReal.exact(rhs, prec))


def probe_chain(candidate, thresholds: Thresholds = Thresholds(),
                ladder: Sequence[int] = DEFAULT_LADDER) -> ChainReport:
    """Evaluate every step of the contradiction chain on ``candidate``.

    Each step is decided on the candidate's own numbers, whatever the verdicts
    of earlier steps.  A step is NotApplicable only when a quantity it needs
    does not exist (no square divisor, x outside (0, x_cap]).
    """
    n = as_factored(candidate)
    if n.is_one:
        raise DomainError("the chain needs a candidate >= 2")
    ladder = tuple(ladder)
    p0 = ladder[0]
    p = n.largest_prime()
    a_p = n.segments[-1][0]
    m = n.divide(FactoredNumber.from_exponents({p: 1}))
    q = next((hi for a, lo, hi in reversed(n.segments) if a >= 2), None)
    r = table().pi(p)
    p_next = next_prime(p)

    def L(prec):  # log n
        return log_n(n, prec)

    def Lp(prec):
        return XReal.exact(p, prec).log()

    def Lmp2(prec):  # log(m p^2) = log n + log p
        return L(prec) + Lp(prec)

    def LLmp2(prec):
        return Lmp2(prec).log()

    def x(prec):
        return Lp(prec) / Lmp2(prec)

    def const(v):
        return lambda prec: XReal.exact(v, prec)

    A = 1 - mpq(1, p * p + p + 1)  # p sigma(p) / sigma(p^2)
    steps: list[Step] = []

    def cmp_step(step_id, statement, lhs, rel, rhs, extra=()):
        c = certified_compare(lhs, rel, rhs, ladder)
        checks = [_check(statement, c)] + list(extra) if extra else []
        verdict = combine([c.verdict] + [Verdict(e["verdict"]) for e in extra]) if extra else c.verdict
        steps.append(Step(step_id, statement, verdict, c.lhs, c.rhs, checks))
        return c

    verdict, why = _sa_membership(n)
    steps.append(Step("S0", f"n is SA ({why})", verdict))

    steps.append(Step("S1", "largest prime p has exponent 1, so gcd(n/p, p) = 1",
                      Verdict.HOLDS if a_p == 1 else Verdict.FAILS,
                      XReal.exact(a_p, p0), XReal.exact(1, p0)))
    cmp_step("S2", "p < log n", const(p), "<", L)

    info = certified_compare(x, "<", lambda prec: L(prec).log() / L(prec), ladder)
    s3 = cmp_step("S3", "x = log p / log(m p^2) < x_cap", x, "<", const(thresholds.x_cap))
    steps[-1].checks = [_check("x < x_cap", s3), _check("x < log log n / log n", info)]

    s4 = cmp_step("S4", "1 - 1/(p^2+p+1) >= log log(mp) / log log(m p^2)",
                  const(A), ">=", lambda prec: L(prec).log() / LLmp2(prec))

    xv = x(p0)
    if xv.lo > 0 and xv.hi <= thresholds.x_cap:
        sup = certified_compare(lambda prec: (-x(prec)).log1p(), ">", lambda prec: x(prec) * -2, ladder)
        support = _check("log(1 - x) > -2x", sup)
    else:
        support = _na_check("log(1 - x) > -2x", "x outside (0, x_cap]")
    s5 = cmp_step("S5", "1 - 1/(p^2+p+1) > 1 - 2 log p / (log(m p^2) log log(m p^2))",
                  const(A), ">", lambda prec: 1 - Lp(prec) * 2 / (Lmp2(prec) * LLmp2(prec)), extra=[support])

    cmp_step("S6", "2 (p^2+p+1) log p > log(m p^2) log log(m p^2)",
             lambda prec: Lp(prec) * (2 * (p * p + p + 1)), ">", lambda prec: Lmp2(prec) * LLmp2(prec))
    cmp_step("S7", "log p < log log(m p^2)", Lp, "<", LLmp2)

    s8b = certified_compare(const(p), ">", lambda prec: L(prec).sqrt() / 3, ladder)
    cmp_step("S8", "p > sqrt(log(m p^2)) / 3 and p > sqrt(log n) / 3",
             const(p), ">", lambda prec: Lmp2(prec).sqrt() / 3, extra=[_check("p > sqrt(log n) / 3", s8b)])

    steps.append(_exact_int_step("S9", f"p > p_floor = {thresholds.p_floor}", p > thresholds.p_floor,
                                 p, thresholds.p_floor, p0))

    lower = _theta_below_log(n, L, ladder)
    cmp_step("S10", "theta(p_r) <= log n < theta(p_{r+1})", L, "<", _theta(p_next),
             extra=[_check("theta(p_r) <= log n", lower)])

    if q is None:
        for sid, text in (("S11", "p < log p_{r+1} + log n - 0.998 q_n"),
                          ("S12", "p_{r+1} < 2 p_r and log p_{r+1} > 0.998 q_n"),
                          ("S13", "q_n > sqrt(p_r), contradicting S12")):
            steps.append(Step(sid, text, Verdict.NOT_APPLICABLE,
                              checks=[_na_check(text, "n is squarefree, q_n does not exist")]))
    else:
        def Lpn(prec):
            return XReal.exact(p_next, prec).log()

        theta_reading = certified_compare(const(p), "<", lambda prec: Lpn(prec) + chebyshev_theta(p, prec), ladder)
        chain_top = certified_compare(L, "<", lambda prec: Lpn(prec) + chebyshev_theta(p, prec), ladder)
        cmp_step("S11", "p < log p_{r+1} + log n - 0.998 q_n",
                 const(p), "<", lambda prec: Lpn(prec) + L(prec) - XReal.exact(Q_COEFF * q, prec),
                 extra=[_check("p < log p_{r+1} + theta(p_r)", theta_reading),
                        _check("log n < log p_{r+1} + theta(p_r)", chain_top)])

        bertrand = Verdict.HOLDS if p_next < 2 * p else Verdict.FAILS
        cmp_step("S12", "p_{r+1} < 2 p_r and log p_{r+1} > 0.998 q_n",
                 Lpn, ">", const(Q_COEFF * q),
                 extra=[{"check": "p_{r+1} < 2 p_r", "verdict": bertrand.value,
                         "lhs_lo": float(p_next), "lhs_hi": float(p_next),
                         "rhs_lo": float(2 * p), "rhs_hi": float(2 * p)}])

        steps.append(_exact_int_step("S13", "q_n > sqrt(p_r), contradicting S12", q * q > p, q * q, p, p0))

    report = ChainReport(
        candidate=n,
        thresholds=thresholds,
        ladder=ladder,
        premises={
            "is_sa_in_range": steps[0].verdict.value,
            "n_threshold_used": f"10^{thresholds.n_floor_log10}",
            "p": p,
            "m": str(m),
            "q_n": q,
            "r": r,
        },
        relaxed_premises=_relaxed(n, thresholds, ladder),
        steps=steps,
    )
    if s3.verdict is Verdict.HOLDS and s4.verdict is Verdict.HOLDS and s5.verdict is not Verdict.HOLDS:
        msg = f"S3 and S4 hold but S5 is {s5.verdict.value} for {n}"
        log.critical(msg)
        report.implication_violations.append(msg)
    return report


def _relaxed(n: FactoredNumber, th: Thresholds, ladder) -> list[str]:
    out = []
    floor = certified_compare(lambda prec: log_n(n, prec), ">",
                              lambda prec: XReal.exact(th.n_floor_log10, prec) * XReal.exact(10, prec).log(),
                              ladder)
    if floor.verdict is not Verdict.HOLDS:
        lo, hi = floor.lhs.to_floats()
        out.append(f"n > 10^{th.n_floor_log10} not met (log n in [{lo!r}, {hi!r}])")
    if th.p_floor != DEFAULT_P_FLOOR:
        out.append(f"p_floor set to {th.p_floor} instead of {DEFAULT_P_FLOOR}")
    if th.x_cap != DEFAULT_X_CAP:
        out.append(f"x_cap set to {th.x_cap} instead of 1/100")
    out.append("extraordinary (GA1 and GA2) is assumed, not verified")
    return out


# -- G(mp) >= G(mp^2) and its reformulation ------------------------------------


def equivalence_test_prime_square(m, p: int, ladder: Sequence[int] = DEFAULT_LADDER) -> tuple[Verdict, Verdict]:
    """Verdicts of G(mp) >= G(mp^2) and of p sigma(p)/sigma(p^2) >= loglog(mp)/loglog(mp^2)."""
    m = as_factored(m)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m.exponent_of(p):
        raise ValueError("p must not divide m")
    pf = FactoredNumber.from_exponents({p: 1})
    mp, mp2 = m * pf, m * pf * pf
    if mp.bit_length_bound() < 2 and mp.to_int() <= 2:
        raise DomainError("domain: need m p >= 3 so that log log(mp) > 0")
    direct = certified_compare(g_expr(mp), ">=", g_expr(mp2), ladder)
    A = 1 - mpq(1, p * p + p + 1)
    reform = certified_compare(
        lambda prec: XReal.exact(A, prec), ">=",
        lambda prec: log_n(mp, prec).log() / log_n(mp2, prec).log(), ladder,
    )
    return direct.verdict, reform.verdict
