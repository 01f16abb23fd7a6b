# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sieve kernels.  Same contracts as ``_fallback``."""

import numpy as np

from libc.math cimport sqrt


cdef inline long long _isqrt(long long n) nogil:
    cdef long long r = <long long>sqrt(<double>n)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


def sigma_segment(long long lo, long long hi):
    """sigma(n) for lo <= n < hi, summing divisor pairs (d, n/d) with d <= sqrt(n)."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    out = np.zeros(hi - lo, dtype=np.int64)
    cdef long long[::1] s = out
    cdef long long d, n, q, dmax, start
    with nogil:
        dmax = _isqrt(hi - 1) if hi > 1 else 0
        for d in range(1, dmax + 1):
            start = ((lo + d - 1) // d) * d
            if start < d * d:
                start = d * d
            n = start
            q = n // d
            while n < hi:
                if q == d:
                    s[n - lo] += d
                else:
                    s[n - lo] += d + q
                n += d
                q += 1
    return out


def robin_filter(const long long[::1] sigma, long long lo, const long long[::1] bounds,
                 long long block, int shift):
    """Offsets i with sigma[i] * 2**shift >= (lo + i) * bounds[i // block].

    ``bounds[b]`` is a certified lower bound of 2**shift * e^gamma * loglog(n)
    over block b, so every offset *not* returned satisfies G(n) < e^gamma.
    """
    cdef Py_ssize_t size = sigma.shape[0]
    flagged = np.empty(size, dtype=np.int64)
    cdef long long[::1] f = flagged
    cdef Py_ssize_t i, count = 0
    with nogil:
        for i in range(size):
            if (sigma[i] << shift) >= (lo + i) * bounds[i // block]:
                f[count] = i
                count += 1
    return flagged[:count].copy()


def sa_records(const long long[::1] sigma, long long lo, long long best_sigma, long long best_n):
    """Offsets where sigma(n)/n strictly exceeds every earlier ratio.

    Returns (offsets, best_sigma, best_n) with the running record updated.
    """
    cdef Py_ssize_t size = sigma.shape[0]
    cdef Py_ssize_t i
    cdef long long bs = best_sigma, bn = best_n, n
    out = []
    for i in range(size):
        n = lo + i
        if sigma[i] * bn > bs * n:
            bs = sigma[i]
            bn = n
            out.append(i)
    return np.asarray(out, dtype=np.int64), bs, bn
