"""NumPy implementations of the sieve kernels (used when the extension is absent)."""

import math

import numpy as np


def sigma_segment(lo: int, hi: int) -> np.ndarray:
    """sigma(n) for lo <= n < hi, summing divisor pairs (d, n/d) with d <= sqrt(n)."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    s = np.zeros(hi - lo, dtype=np.int64)
    dmax = math.isqrt(hi - 1) if hi > 1 else 0
    for d in range(1, dmax + 1):
        start = max(-(-lo // d) * d, d * d)
        if start >= hi:
            continue
        q = np.arange(start // d, (hi - 1) // d + 1, dtype=np.int64)
        s[start - lo : hi - lo : d] += d + q
        if start == d * d:
            s[start - lo] -= d  # n = d^2 counts its root once
    return s


def robin_filter(sigma, lo: int, bounds, block: int, shift: int) -> np.ndarray:
    """Offsets i with sigma[i] * 2**shift >= (lo + i) * bounds[i // block]."""
    sigma = np.asarray(sigma, dtype=np.int64)
    idx = np.arange(sigma.shape[0], dtype=np.int64)
    k = np.asarray(bounds, dtype=np.int64)[idx // block]
    return np.flatnonzero((sigma << shift) >= (lo + idx) * k).astype(np.int64)


def sa_records(sigma, lo: int, best_sigma: int, best_n: int):
    """Offsets where sigma(n)/n strictly exceeds every earlier ratio."""
    sigma = np.asarray(sigma, dtype=np.int64)
    n = lo + np.arange(sigma.shape[0], dtype=np.int64)
    ratio = sigma / n
    prior = np.maximum.accumulate(np.concatenate(([best_sigma / best_n], ratio)))[:-1]
    # float filter with slack, then an exact integer pass over the survivors
    candidates = np.flatnonzero(ratio >= prior * (1 - 1e-12))
    out = []
    bs, bn = int(best_sigma), int(best_n)
    for i in candidates.tolist():
        s, m = int(sigma[i]), lo + i
        if s * bn > bs * m:
            bs, bn = s, m
            out.append(i)
    return np.asarray(out, dtype=np.int64), bs, bn
