import json
import math

import numpy as np
import pytest
from gmpy2 import mpq

from gronwall import kernels
from gronwall.abundance import (
    SCHEMA,
    STRUCTURED_LABEL,
    AbundanceRecord,
    breakpoint_eps,
    ca_breakpoints,
    enum_ca,
    enum_sa_bruteforce,
    enum_sa_structured,
    read_records,
    sa_structured_ints,
    write_records,
)
from gronwall.factored import sigma_ratio

from conftest import sigma_brute


def test_bruteforce_prefix(sa_brute_1e6):
    ns = [int(r.n) for r in sa_brute_1e6]
    assert ns[:12] == [1, 2, 4, 6, 12, 24, 36, 48, 60, 120, 180, 240]
    assert 10080 in ns
    assert len(ns) == 31


def test_bruteforce_against_exact_ratios():
    best, expected = mpq(0), []
    for n in range(1, 20001):
        r = mpq(sigma_brute(n), n)
        if r > best:
            best, expected = r, expected + [n]
    assert [int(r.n) for r in enum_sa_bruteforce(20000)] == expected


def test_structured_equals_bruteforce(sa_brute_1e6):
    assert [int(r.n) for r in enum_sa_structured(10**6)] == [int(r.n) for r in sa_brute_1e6]


def test_structured_equals_bruteforce_to_1e7():
    brute = [int(r.n) for r in enum_sa_bruteforce(10**7)]
    assert [n for n, _, _ in sa_structured_ints(10**7)] == brute


def test_structured_records_increase():
    rows = sa_structured_ints(10**60)
    ratios = [r for _, _, r in rows]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert all(sigma_ratio(n) == r for n, _, r in rows[:200])


def test_structured_log_limit_and_labels():
    recs = enum_sa_structured(log_limit=30 * math.log(10))
    assert recs[-1].label == STRUCTURED_LABEL
    assert recs[0].label is None
    with pytest.raises(ValueError, match="structured cap"):
        enum_sa_structured(log_limit=1000)
    with pytest.raises(ValueError):
        enum_sa_structured()


def test_bruteforce_limit_guard():
    with pytest.raises(ValueError):
        enum_sa_bruteforce(10**7 + 1)


# -- CA ----------------------------------------------------------------------------


def test_breakpoint_values():
    eps, _ = breakpoint_eps(2, 1, 64)
    lo, hi = eps.to_floats()
    assert abs(lo - math.log(1.5) / math.log(2)) < 1e-15
    eps3, _ = breakpoint_eps(3, 1, 64)
    assert abs(eps3.to_floats()[0] - math.log(4 / 3) / math.log(3)) < 1e-15


def test_breakpoints_decrease():
    bps, floor = ca_breakpoints(1000)
    for a, b in zip(bps, bps[1:]):
        assert a.eps.lo >= b.eps.lo
    assert floor.hi <= bps[-1].eps.lo


def test_ca_first_records():
    recs = enum_ca(50)
    assert [int(r.n) for r in recs[:8]] == [1, 2, 6, 12, 60, 120, 360, 2520]
    assert recs[0].epsilon_hi is None


@pytest.mark.parametrize("eps, expected", [(0.7, 1), (0.4, 2), (0.2, 12), (0.1, 60), (0.05, 2520)])
def test_ca_record_maximises_over_its_interval(eps, expected):
    recs = enum_ca(100)
    holder = [r for r in recs if r.epsilon_lo.hi < eps and (r.epsilon_hi is None or eps < r.epsilon_hi.lo)]
    assert [int(r.n) for r in holder] == [expected]
    sigma = kernels.sigma_segment(1, 10**6 + 1).astype(float)
    n = np.arange(1, 10**6 + 1)
    assert int(n[np.argmax(np.log(sigma) - (1 + eps) * np.log(n))]) == expected


def test_ca_numbers_are_sa():
    recs = enum_ca(400)
    bits = max(r.n.bit_length_bound() for r in recs)
    sa = {n for n, _, _ in sa_structured_ints(2 ** int(bits + 2))}
    assert all(int(r.n) in sa for r in recs)


def test_ca_large_run(ca_records):
    last = ca_records[-1]
    assert last.largest_prime == 999983
    assert last.q_v == 1381
    assert str(last.n).endswith("[1399..999983]^1")
    # exponents are non-increasing along every record
    assert all(r.n.is_hardy_ramanujan() for r in ca_records[::500])


# -- persistence ---------------------------------------------------------------------


def test_json_round_trip_is_lossless(tmp_path):
    recs = enum_ca(60)
    path = tmp_path / "ca.jsonl"
    assert write_records(path, recs, {"max_prime": 60}) == len(recs)
    back = list(read_records(path))
    assert [str(r.n) for r in back] == [str(r.n) for r in recs]
    for a, b in zip(recs, back):
        if a.epsilon_lo is not None:
            assert b.epsilon_lo.lo <= a.epsilon_lo.lo and a.epsilon_lo.hi <= b.epsilon_lo.hi
        assert (a.epsilon_hi is None) == (b.epsilon_hi is None)
        assert b.exact_sigma_ratio() == a.exact_sigma_ratio()
    header = json.loads(path.read_text().splitlines()[0])
    assert header["schema"] == SCHEMA and header["config_hash"]


def test_append_and_header_validation(tmp_path):
    path = tmp_path / "sa.jsonl"
    write_records(path, enum_sa_bruteforce(100), {"limit": 100})
    write_records(path, enum_sa_bruteforce(10)[-1:], {"limit": 10})
    assert len(list(read_records(path))) == len(enum_sa_bruteforce(100)) + 1
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"schema": "other"}) + "\n")
    with pytest.raises(ValueError):
        list(read_records(bad))
    with pytest.raises(ValueError):
        write_records(bad, [], {})


def test_giant_records_skip_exact_ratio(ca_records):
    d = ca_records[-1].to_json()
    assert d["sigma_ratio"] is None
    assert d["log_n_lo"] <= d["log_n_hi"]
    back = AbundanceRecord.from_json(d)
    assert back.q_v == 1381 and back.largest_prime == 999983
