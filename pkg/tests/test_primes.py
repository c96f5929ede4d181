import math
import struct
import zlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from restricted_goldbach.digitset import RestrictedSet
from restricted_goldbach.errors import ConfigurationError, DomainError, SizeError
from restricted_goldbach.primes import (
    CACHE_MAGIC,
    build_table,
    cutoff_for,
    exception_scan,
    load_or_build,
    read_cache,
    unrepresented,
    weighted_rep,
    write_cache,
)

from oracles import is_prime, pair_reps, primes_between, weighted_pairs


@pytest.mark.parametrize(
    "X, P, expected",
    [
        (10, 1, [2, 3, 5, 7]),
        (30, 5, [7, 11, 13, 17, 19, 23, 29]),
        (100, 3, [p for p in range(5, 100) if is_prime(p)]),
        (4, 0, [2, 3]),
    ],
)
def test_table_examples(X, P, expected):
    assert build_table(X, cutoff=P).primes.tolist() == expected


def test_default_cutoff():
    assert cutoff_for(10**5, 0.05) == 31  # floor(10**1.5)
    assert cutoff_for(10**4, 0.05) == 15
    t = build_table(10**4)
    assert t.P == 15 and t.primes[0] == 17


def test_table_validation():
    with pytest.raises(SizeError):
        build_table(10**9 + 1)
    with pytest.raises(DomainError):
        build_table(3)
    with pytest.raises(DomainError):
        build_table(100, delta0=0.2)
    with pytest.raises(ConfigurationError):
        build_table(100, cutoff=100)


@given(st.integers(4, 5000), st.data())
def test_table_matches_trial_division(X, data):
    P = data.draw(st.integers(0, X - 1))
    t = build_table(X, cutoff=P)
    ref = primes_between(P, X)
    assert t.primes.tolist() == ref
    assert np.allclose(t.weights, np.log(ref)) if ref else t.weights.size == 0
    probe = np.arange(-3, X + 3)
    assert t.contains(probe).tolist() == [P < v < X and is_prime(v) for v in probe]


def test_segmented_sieve_matches_plain_sieve():
    # several segments of 2**20 odd numbers, with a cutoff inside the first one
    X, P = 5 * 2**20 + 12345, 1000
    sieve = np.ones(X, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(X) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    sieve[: P + 1] = False
    assert np.array_equal(build_table(X, cutoff=P).primes, np.flatnonzero(sieve))


# -- weighted representations ------------------------------------------------------


def test_weighted_rep_examples():
    t = build_table(20, cutoff=1)
    r = weighted_rep(t, 10)
    assert r.rep_count == 3
    assert r.R_weighted == pytest.approx(2 * math.log(3) * math.log(7) + math.log(5) ** 2)
    assert r.R_weighted == pytest.approx(6.866, abs=1e-3)
    r = weighted_rep(t, 4)
    assert r.rep_count == 1 and r.R_weighted == pytest.approx(0.4805, abs=1e-4)
    r = weighted_rep(build_table(20, cutoff=5), 10)
    assert r.rep_count == 0 and r.R_weighted == 0 and r.is_exception


def test_weighted_rep_domain():
    t = build_table(20, cutoff=1)
    with pytest.raises(DomainError):
        weighted_rep(t, 9)
    with pytest.raises(DomainError):
        weighted_rep(t, 40)
    with pytest.raises(DomainError):
        weighted_rep(t, 0)


@given(st.integers(4, 3000), st.data())
def test_weighted_rep_matches_pairs(X, data):
    P = data.draw(st.integers(0, X // 2))
    n = 2 * data.draw(st.integers(1, X - 1))
    t = build_table(X, cutoff=P)
    ps = primes_between(P, X)
    r = weighted_rep(t, n)
    assert r.rep_count == len(pair_reps(ps, n))
    assert r.R_weighted == pytest.approx(weighted_pairs(ps, n), rel=1e-12, abs=1e-12)
    assert (r.R_weighted > 0) == (r.rep_count > 0)


@given(st.integers(10, 3000), st.data())
def test_odd_count_iff_twice_a_prime(X, data):
    P = data.draw(st.integers(0, X // 3))
    n = 2 * data.draw(st.integers(2, X - 1))
    t = build_table(X, cutoff=P)
    r = weighted_rep(t, n)
    assert (r.rep_count % 2 == 1) == bool(t.contains([n // 2])[0])


@given(st.integers(10, 3000), st.data())
def test_raising_the_cutoff_never_adds_pairs(X, data):
    P1 = data.draw(st.integers(0, X - 2))
    P2 = data.draw(st.integers(P1, X - 1))
    n = 2 * data.draw(st.integers(2, X - 1))
    assert weighted_rep(build_table(X, cutoff=P2), n).rep_count <= weighted_rep(build_table(X, cutoff=P1), n).rep_count


# -- exception scan ------------------------------------------------------------


def test_scan_examples():
    t = build_table(100, cutoff=1)
    res = exception_scan(RestrictedSet.of(10, (2, 8), 2), t)
    assert res.scanned == 4 and res.exceptions == [] and res.cardinality == 4
    res = exception_scan(RestrictedSet.of(10, (1, 3), 2), t)
    assert res.scanned == 0 and res.exception_count == 0


def test_scan_unrestricted_1e6():
    t = build_table(10**6, cutoff=1)
    res = exception_scan(RestrictedSet.of(10, range(10), 6), t)
    assert res.scanned == 10**6 // 2 - 2
    assert res.exception_count == 0


def test_scan_with_empty_table_flags_everything():
    t = build_table(100, cutoff=99)
    assert t.primes.size == 0
    res = exception_scan(RestrictedSet.of(10, (2, 8), 2), t)
    assert [r.n for r in res.exceptions] == [22, 28, 82, 88]


def test_scan_mismatched_X():
    with pytest.raises(ConfigurationError):
        exception_scan(RestrictedSet.of(10, (2, 8), 2), build_table(1000, cutoff=1))


def test_scan_threads_agree():
    t = build_table(10**5, cutoff=40)
    rs = RestrictedSet.of(10, range(10), 5)
    a = exception_scan(rs, t, chunk=4096)
    b = exception_scan(rs, t, threads=4, chunk=4096)
    assert a == b
    assert a.exception_count > 0  # the cutoff leaves small n unrepresented


@given(st.integers(4, 2000), st.data())
def test_unrepresented_matches_pair_search(X, data):
    P = data.draw(st.integers(0, X // 2))
    t = build_table(X, cutoff=P)
    evens = np.arange(4, 2 * X, 2)
    ps = primes_between(P, X)
    ref = [n for n in evens.tolist() if not pair_reps(ps, n)]
    assert unrepresented(t, evens).tolist() == ref


# -- cache ------------------------------------------------------------------------


def test_cache_round_trip(tmp_path):
    t = build_table(10**5, cutoff=31)
    path = tmp_path / "p.bin"
    write_cache(t, path)
    raw = path.read_bytes()
    assert raw.startswith(CACHE_MAGIC)
    assert struct.unpack("<QQ", raw[9:25]) == (10**5, 31)
    assert struct.unpack("<I", raw[-4:])[0] == zlib.crc32(raw[:-4])
    assert len(raw) == 9 + 16 + (10**5 // 2 + 7) // 8 + 4
    back = read_cache(path, 10**5, 31)
    assert np.array_equal(back.primes, t.primes)


def test_cache_rejects_stale_and_corrupt(tmp_path):
    t = build_table(1000, cutoff=1)
    path = tmp_path / "p.bin"
    write_cache(t, path)
    assert read_cache(path, 1000, 2) is None
    assert read_cache(path, 1001, 1) is None
    assert read_cache(tmp_path / "missing.bin", 1000, 1) is None
    raw = bytearray(path.read_bytes())
    raw[30] ^= 0xFF
    path.write_bytes(bytes(raw))
    assert read_cache(path, 1000, 1) is None
    path.write_bytes(b"NOTPRIMES" + bytes(40))
    assert read_cache(path, 1000, 1) is None


def test_load_or_build_rebuilds_stale(tmp_path):
    path = tmp_path / "sub" / "p.bin"
    t1 = load_or_build(1000, 1, path)
    assert path.exists()
    t2 = load_or_build(1000, 10, path)  # stale: rebuilt and overwritten
    assert t2.primes[0] == 11
    assert read_cache(path, 1000, 10) is not None
    assert read_cache(path, 1000, 1) is None
    assert np.array_equal(load_or_build(1000, 1, None).primes, t1.primes)
