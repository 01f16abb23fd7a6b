"""Prime table, deterministic primality below 2**64 and small-integer factoring."""

from __future__ import annotations

import bisect
import math
import threading

import numpy as np

DEFAULT_SIEVE_CAP = 10**7

# Jaeschke / Sorenson-Webster: these witnesses are exact for n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class SieveCapExceeded(ValueError):
    """Raised when a prime beyond the configured sieve cap is needed."""


def sieve(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array (Eratosthenes over odds)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_odd_prime = np.ones((limit - 1) // 2, dtype=bool)  # index i <-> 2i+3
    for i in range((math.isqrt(limit) - 1) // 2):
        if is_odd_prime[i]:
            p = 2 * i + 3
            is_odd_prime[(p * p - 3) // 2 :: p] = False
    odd = 2 * np.flatnonzero(is_odd_prime).astype(np.int64) + 3
    return np.concatenate(([2], odd)).astype(np.int64)


class PrimeTable:
    """Process-wide table of primes, grown on demand up to ``cap``."""

    def __init__(self, cap: int = DEFAULT_SIEVE_CAP):
        self.cap = cap
        self._limit = 0
        self._primes = np.zeros(0, dtype=np.int64)
        self._list: list[int] = []
        self._lock = threading.Lock()

    @property
    def limit(self) -> int:
        return self._limit

    def ensure(self, limit: int) -> None:
        if limit <= self._limit:
            return
        if limit > self.cap:
            raise SieveCapExceeded(
                f"extend sieve: primes up to {limit} requested, cap is {self.cap}"
            )
        with self._lock:
            if limit <= self._limit:
                return
            target = min(self.cap, max(limit, 2 * self._limit, 1 << 16))
            self._primes = sieve(target)
            self._list = self._primes.tolist()
            self._limit = target

    def primes_upto(self, x: int) -> list[int]:
        self.ensure(x)
        return self._list[: bisect.bisect_right(self._list, x)]

    def pi(self, x: int) -> int:
        """Number of primes ``<= x``."""
        self.ensure(max(x, 2))
        return bisect.bisect_right(self._list, x)

    def nth(self, k: int) -> int:
        """The k-th prime, 1-indexed."""
        if k < 1:
            raise ValueError("prime index starts at 1")
        while len(self._list) < k:
            # p_k < k (log k + log log k) for k >= 6
            guess = int(k * (math.log(k) + math.log(math.log(k)))) + 20 if k >= 6 else 20
            self.ensure(max(guess, 2 * self._limit))
        return self._list[k - 1]

    def index(self, p: int) -> int:
        """0-based position of prime ``p`` in the table."""
        self.ensure(p)
        i = bisect.bisect_left(self._list, p)
        if i == len(self._list) or self._list[i] != p:
            raise ValueError(f"{p} is not prime")
        return i

    def slice(self, lo: int, hi: int) -> list[int]:
        """Primes in ``[lo, hi]``."""
        self.ensure(hi)
        return self._list[bisect.bisect_left(self._list, lo) : bisect.bisect_right(self._list, hi)]

    def next_after(self, p: int) -> int:
        if p + 1 <= self.cap:
            self.ensure(min(self.cap, max(p + 1, 2 * p if p > 2 else 3)))
            i = bisect.bisect_right(self._list, p)
            if i < len(self._list):
                return self._list[i]
        return next_prime(p)

    def prev_before(self, p: int) -> int | None:
        if p <= 2:
            return None
        self.ensure(p)
        i = bisect.bisect_left(self._list, p)
        return self._list[i - 1]


_TABLE = PrimeTable()


def table() -> PrimeTable:
    return _TABLE


def set_sieve_cap(cap: int) -> None:
    _TABLE.cap = cap


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (covers all of 2**64)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= 3_317_044_064_679_887_385_961_981:
        raise ValueError("deterministic primality only implemented below 3.3e24")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    if n < 2:
        return 2
    c = n + 1
    if c % 2 == 0:
        c += 1
    while not is_prime(c):
        c += 2
    return c


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"failed to split {n}")


def factor_int(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer (practical below ~2**64)."""
    if n < 1:
        raise ValueError("factor_int needs n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    if n < 1 << 20:
        for p in _TABLE.primes_upto(math.isqrt(n) + 1):
            if p * p > n:
                break
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        if n > 1:
            out[n] = out.get(n, 0) + 1
        return dict(sorted(out.items()))
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_brent(m)
        stack += [d, m // d]
    return dict(sorted(out.items()))
