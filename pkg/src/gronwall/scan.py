"""Exhaustive Robin and Nicolas scans over native-size ranges."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import gmpy2
import numpy as np

from . import kernels
from .factored import g_of_int, nicolas_h
from .numeric import DEFAULT_LADDER, Verdict, XReal, certified_compare, exp_gamma

log = logging.getLogger(__name__)

ROBIN_THRESHOLD = 5040
DEFAULT_SCAN_CAP = 10**8
HARD_SCAN_CAP = 10**9  # int64 headroom of the block filter
DEFAULT_SEGMENT = 1 << 20
FILTER_BLOCK = 4096
FILTER_SHIFT = 30
# below this, log log n is too small for the block bound to be useful
_FILTER_FLOOR = 16


class ScanBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class Finding:
    n: int
    value: XReal | None
    verdict: Verdict  # verdict of the criterion's inequality at n
    critical: bool = False


@dataclass
class ScanReport:
    kind: str
    lo: int
    hi: int
    violations: list[Finding] = field(default_factory=list)
    indeterminates: list[Finding] = field(default_factory=list)
    checksum: int = 0

    @property
    def passes(self) -> int:
        return self.checksum - len(self.violations) - len(self.indeterminates)

    @property
    def critical(self) -> list[Finding]:
        return [f for f in self.violations if f.critical]

    def exit_code(self) -> int:
        if self.critical:
            return 1
        if self.indeterminates:
            return 3
        return 0

    def records(self):
        """JSONL-ready dicts, one per violation or indeterminate, sorted by n."""
        key = "n" if self.kind == "robin" else "j"
        prefix = "g" if self.kind == "robin" else "h"
        for f in sorted(self.violations + self.indeterminates, key=lambda f: f.n):
            lo, hi = f.value.to_floats() if f.value is not None else (None, None)
            rec = {key: f.n, f"{prefix}_lo": lo, f"{prefix}_hi": hi, "verdict": f.verdict.value}
            if self.kind == "robin":
                rec["critical"] = f.critical
            yield rec


def _block_bounds(start: int, size: int) -> list[int]:
    """2**shift * (certified lower bound of e^gamma * log log a), per block start a."""
    eg = exp_gamma(64)
    out = []
    for a in range(start, start + size, FILTER_BLOCK):
        if a < _FILTER_FLOOR:
            out.append(0)
            continue
        bound = (eg * XReal.exact(a, 64).log().log()).lo
        out.append(int(gmpy2.floor(gmpy2.mul_2exp(bound, FILTER_SHIFT))))
    return out


def _robin_segment(lo: int, hi: int, ladder: Sequence[int]) -> tuple[list[Finding], list[Finding]]:
    sigma = kernels.sigma_segment(lo, hi)
    bounds = np.asarray(_block_bounds(lo, hi - lo), dtype=np.int64)
    flagged = kernels.robin_filter(sigma, lo, bounds, FILTER_BLOCK, FILTER_SHIFT)
    violations, unknown = [], []
    for off in flagged.tolist():
        n = lo + off
        s = int(sigma[off])
        cmp = certified_compare(lambda p, n=n, s=s: g_of_int(n, s, p), ">", exp_gamma, ladder)
        if cmp.verdict is Verdict.HOLDS:
            violations.append(Finding(n, cmp.lhs, Verdict.FAILS, critical=n > ROBIN_THRESHOLD))
        elif cmp.verdict is Verdict.INDETERMINATE:
            unknown.append(Finding(n, cmp.lhs, Verdict.INDETERMINATE))
    return violations, unknown


def scan_robin(
    lo: int,
    hi: int,
    ladder: Sequence[int] = DEFAULT_LADDER,
    *,
    cap: int = DEFAULT_SCAN_CAP,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> ScanReport:
    """Every n in [lo, hi] with certified G(n) > e^gamma.

    sigma comes from the segmented divisor-pair sieve.  A per-block integer
    test clears the bulk of each segment; only n it cannot clear are
    evaluated with interval arithmetic.
    """
    if not 2 <= lo <= hi:
        raise ValueError("need 2 <= lo <= hi")
    if hi > min(cap, HARD_SCAN_CAP):
        raise ScanBudgetError(
            f"hi={hi} exceeds the scan cap {min(cap, HARD_SCAN_CAP)}; "
            f"split the range into slices of at most {min(cap, HARD_SCAN_CAP)} "
            "or raise --cap"
        )
    if segment_size % FILTER_BLOCK:
        raise ValueError(f"segment size must be a multiple of {FILTER_BLOCK}")
    starts = list(range(lo, hi + 1, segment_size))
    jobs = [(a, min(a + segment_size, hi + 1)) for a in starts]
    report = ScanReport("robin", lo, hi, checksum=hi - lo + 1)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for viol, unk in pool.map(lambda j: _robin_segment(j[0], j[1], ladder), jobs):
            report.violations.extend(viol)
            report.indeterminates.extend(unk)
    report.violations.sort(key=lambda f: f.n)
    report.indeterminates.sort(key=lambda f: f.n)
    for f in report.critical:
        log.critical("Robin violation above 5040 at n=%d: G in %s", f.n, f.value)
    return report


def scan_nicolas(j_max: int, ladder: Sequence[int] = DEFAULT_LADDER, *, j_min: int = 2) -> ScanReport:
    """Every j in [j_min, j_max] with certified H_j < e^gamma."""
    if j_max < 2 or j_min < 2 or j_min > j_max:
        raise ValueError("need 2 <= j_min <= j_max")
    report = ScanReport("nicolas", j_min, j_max, checksum=j_max - j_min + 1)
    for j in range(j_min, j_max + 1):
        cmp = certified_compare(lambda p, j=j: nicolas_h(j, p), "<", exp_gamma, ladder)
        if cmp.verdict is Verdict.HOLDS:
            report.violations.append(Finding(j, cmp.lhs, Verdict.FAILS, critical=True))
        elif cmp.verdict is Verdict.INDETERMINATE:
            report.indeterminates.append(Finding(j, cmp.lhs, Verdict.INDETERMINATE))
    return report
