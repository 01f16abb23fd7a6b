import random

import pytest

from gronwall.primes import PrimeTable, SieveCapExceeded, factor_int, is_prime, next_prime, sieve, table

from conftest import primes_below


def test_sieve_matches_trial_division():
    assert sieve(5000).tolist() == primes_below(5000)
    assert sieve(1).tolist() == []
    assert sieve(2).tolist() == [2]


def test_prime_counts():
    t = table()
    assert t.pi(10) == 4
    assert t.pi(10**6) == 78498
    assert t.nth(1) == 2 and t.nth(78498) == 999983
    assert t.index(2) == 0 and t.index(999983) == 78497


def test_table_navigation():
    t = table()
    assert t.next_after(7) == 11
    assert t.prev_before(11) == 7
    assert t.prev_before(2) is None
    assert t.slice(10, 30) == [11, 13, 17, 19, 23, 29]
    with pytest.raises(ValueError):
        t.index(9)


def test_sieve_cap_is_enforced():
    t = PrimeTable(cap=1000)
    t.primes_upto(1000)
    with pytest.raises(SieveCapExceeded, match="extend sieve"):
        t.primes_upto(1001)


def test_is_prime_small_and_known():
    assert [n for n in range(60) if is_prime(n)] == primes_below(59)
    assert is_prime(2**61 - 1)
    assert is_prime(18446744073709551557)  # largest prime below 2^64
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime(3825123056546413051)  # spsp to bases 2..23


def test_is_prime_agrees_with_sieve():
    ps = set(sieve(200000).tolist())
    assert all(is_prime(n) == (n in ps) for n in range(200001))


def test_next_prime():
    assert next_prime(1) == 2
    assert next_prime(2) == 3
    assert next_prime(13) == 17
    assert next_prime(14) == 17
    assert next_prime(2**64 - 59) == 18446744073709551629


def test_primality_limit_is_explicit():
    with pytest.raises(ValueError, match="3.3e24"):
        is_prime(2**89 - 1)


@pytest.mark.parametrize("seed", range(5))
def test_factor_int_round_trip(seed):
    rng = random.Random(seed)
    for _ in range(50):
        n = rng.randrange(2, 10**18)
        f = factor_int(n)
        prod = 1
        for p, a in f.items():
            assert is_prime(p)
            prod *= p**a
        assert prod == n


def test_factor_int_semiprime():
    assert factor_int(1000003 * (2**61 - 1)) == {1000003: 1, 2**61 - 1: 1}
    assert factor_int(10080) == {2: 5, 3: 2, 5: 1, 7: 1}
    assert factor_int(1) == {}
