import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from restricted_goldbach.digitset import (
    DigitSystem,
    RestrictedSet,
    contains,
    count_multiples,
    divisor_discard_count,
    divisors,
    enumerate_members,
    gcd_reduce,
    multiples_bound,
    residue_counts,
    sieve_bound_check,
)
from restricted_goldbach.errors import DomainError, SizeError

from oracles import members, multiples_bruteforce


@st.composite
def restricted_sets(draw, max_card=10**4, max_base=12):
    b = draw(st.integers(2, max_base))
    digits = draw(st.lists(st.integers(0, b - 1), min_size=2, max_size=b, unique=True))
    kmax = max(1, int(math.log(max_card) / math.log(len(digits))))
    k = draw(st.integers(1, kmax))
    return RestrictedSet.of(b, digits, k)


# -- construction --------------------------------------------------------------


def test_bad_digit_is_named():
    with pytest.raises(DomainError, match="12"):
        DigitSystem(10, (1, 12))


@pytest.mark.parametrize("digits", [(3,), (3, 3), ()])
def test_need_two_distinct_digits(digits):
    with pytest.raises(DomainError):
        DigitSystem(10, digits)


def test_base_and_k_validated():
    with pytest.raises(DomainError):
        DigitSystem(1, (0, 1))
    with pytest.raises(DomainError):
        RestrictedSet.of(10, (1, 3), 0)


def test_sizes():
    rs = RestrictedSet.of(10, (3, 1), 2)
    assert rs.digits == (1, 3)
    assert rs.X == 100 and rs.cardinality == 4
    assert rs.min_member == 11 and rs.max_member == 33


# -- enumerate / contains --------------------------------------------------------


@pytest.mark.parametrize(
    "b, D, k, expected",
    [
        (10, (1, 3), 2, [11, 13, 31, 33]),
        (10, tuple(range(10)), 2, list(range(100))),
        (2, (0, 1), 3, list(range(8))),
    ],
)
def test_enumerate_examples(b, D, k, expected):
    assert enumerate_members(RestrictedSet.of(b, D, k)).tolist() == expected


def test_enumerate_cap():
    with pytest.raises(SizeError, match="1000000"):
        enumerate_members(RestrictedSet.of(10, range(10), 6), cap=10**5)


@pytest.mark.parametrize("n, expected", [(31, True), (30, False), (-11, False), (100, False)])
def test_contains_examples(n, expected):
    assert contains(RestrictedSet.of(10, (1, 3), 2), n) is expected


def test_leading_zero_allowed_when_zero_is_a_digit():
    assert contains(RestrictedSet.of(10, (0, 1), 2), 1)
    assert not contains(RestrictedSet.of(10, (1, 3), 2), 1)


@given(restricted_sets())
def test_enumeration_matches_itertools_and_is_strictly_increasing(rs):
    got = enumerate_members(rs)
    assert got.tolist() == members(rs.base, rs.digits, rs.k)
    assert len(got) == rs.cardinality
    assert np.all(np.diff(got) > 0)
    assert all(contains(rs, int(n)) for n in got[:50])


# -- count_multiples -----------------------------------------------------------------


@pytest.mark.parametrize("m, expected", [(11, 2), (3, 1), (1, 4)])
def test_count_multiples_examples(m, expected):
    # brute force over {11, 13, 31, 33}: 11 and 33 for m = 11, only 33 for m = 3
    rs = RestrictedSet.of(10, (1, 3), 2)
    assert count_multiples(rs, m) == expected
    assert expected == sum(1 for n in (11, 13, 31, 33) if n % m == 0)


def test_count_multiples_rejects_zero():
    with pytest.raises(DomainError):
        count_multiples(RestrictedSet.of(10, (1, 3), 2), 0)


@given(restricted_sets(max_card=10**5), st.lists(st.integers(1, 10**4), min_size=1, max_size=20))
def test_dp_matches_bruteforce(rs, ms):
    vals = members(rs.base, rs.digits, rs.k)
    ref = multiples_bruteforce(vals, ms, rs.X)
    assert {m: count_multiples(rs, m) for m in ms} == ref


@given(restricted_sets(max_card=3000), st.integers(1, 500))
def test_residue_classes_partition_the_set(rs, m):
    counts = residue_counts(rs, m)
    assert int(sum(counts)) == rs.cardinality
    assert int(counts[0]) == count_multiples(rs, m)
    vals = np.array(members(rs.base, rs.digits, rs.k))
    assert np.array_equal(np.bincount(vals % m, minlength=m), counts.astype(np.int64))


def test_sparse_path_for_huge_moduli():
    # m beyond the dense kernel limit goes through the dictionary automaton
    rs = RestrictedSet.of(10, (0, 1), 12)
    m = 10**11
    assert count_multiples(rs, m) == 2  # 0 and 10**11
    assert count_multiples(rs, 10**8 + 7) == sum(1 for v in members(10, (0, 1), 12) if v % (10**8 + 7) == 0)


def test_exact_beyond_int64():
    # |D|^k = 10**30 overflows int64; the object path stays exact
    rs = RestrictedSet.of(10, range(10), 30)
    assert count_multiples(rs, 7) == (10**30 - 1) // 7 + 1
    assert count_multiples(rs, 10**5) == 10**25


# -- sieve bound ----------------------------------------------------------------------


def test_sieve_bound_examples():
    c = sieve_bound_check(RestrictedSet.of(10, (1, 3), 2), 11)
    assert c.count == 2 and c.holds
    assert c.bound == pytest.approx(80 / 11 ** (math.log(2) / math.log(10)))
    assert c.bound == pytest.approx(38.87, abs=0.01)

    c = sieve_bound_check(RestrictedSet.of(10, range(10), 3), 100)
    assert c.count == 10 and c.bound == pytest.approx(200) and c.holds

    c = sieve_bound_check(RestrictedSet.of(10, (0, 1), 4), 1000)
    # members divisible by 1000 among the 16: 0 and 1000
    assert c.count == 2
    assert c.bound == pytest.approx(2 * 10 * 16 / 1000 ** (math.log(2) / math.log(10)))
    assert c.holds


@given(restricted_sets(max_card=10**4), st.data())
def test_sieve_bound_holds_while_a_digit_block_fits(rs, data):
    # m < b^(k+1): some block of trailing digits can be varied freely
    m = data.draw(st.integers(1, rs.base ** (rs.k + 1) - 1))
    assert sieve_bound_check(rs, m).holds


@given(restricted_sets(max_card=10**4), st.integers(1, 10**6))
def test_sieve_bound_breaks_only_on_the_zero_member(rs, m):
    c = sieve_bound_check(rs, m)
    if not c.holds:
        assert 0 in rs.digits and c.count == 1 and m > rs.X
        assert m**rs.system.dimension > 2 * rs.base * rs.cardinality


def test_zero_member_counterexample():
    # 0 is a multiple of every m while the bound decays below 1
    c = sieve_bound_check(RestrictedSet.of(2, (0, 1), 1), 9)
    assert c.count == 1
    assert c.bound == pytest.approx(8 / 9)
    assert not c.holds
    assert sieve_bound_check(RestrictedSet.of(2, (1,) + (0,), 1), 3).holds


@given(restricted_sets(max_card=10**4).filter(lambda r: 0 in r.digits), st.data())
def test_tightness_at_powers_of_the_base(rs, data):
    j = data.draw(st.integers(0, rs.k))
    m = rs.base**j
    assert count_multiples(rs, m) == rs.system.size ** (rs.k - j)
    # the bound without its 2b factor is attained exactly
    assert multiples_bound(rs, m) / (2 * rs.base) == pytest.approx(rs.system.size ** (rs.k - j))


# -- divisor discard ----------------------------------------------------------------------


def test_divisors():
    assert divisors(1) == [1]
    assert divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]
    with pytest.raises(DomainError):
        divisors(0)
    with pytest.raises(SizeError):
        divisors(10**12 + 1)


def test_divisor_discard_examples():
    assert divisor_discard_count(RestrictedSet.of(10, (1, 3), 2), 33, 10) == 3
    assert divisor_discard_count(RestrictedSet.of(10, (1, 3), 2), 33, 33) == 0
    # multiples of 20, 25, 50, 100 in [0, 99]
    assert divisor_discard_count(RestrictedSet.of(10, range(10), 2), 100, 10) == 5 + 4 + 2 + 1
    with pytest.raises(DomainError):
        divisor_discard_count(RestrictedSet.of(10, (1, 3), 2), 0, 1)


@given(restricted_sets(max_card=2000), st.integers(1, 5000), st.floats(1, 6000))
def test_divisor_discard_bruteforce(rs, r, Y):
    vals = members(rs.base, rs.digits, rs.k)
    ref = sum(1 for d in range(1, r + 1) if r % d == 0 and d > Y for v in vals if v % d == 0)
    assert divisor_discard_count(rs, r, Y) == ref


# -- gcd reduction -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "digits, g, reduced",
    [((2, 4, 8), 2, (1, 2, 4)), ((1, 3), 1, (1, 3)), ((0, 5), 5, (0, 1))],
)
def test_gcd_reduce(digits, g, reduced):
    got_g, system = gcd_reduce(DigitSystem(10, digits))
    assert got_g == g and system.digits == reduced
    if g == 1:
        assert system is not None and system == DigitSystem(10, digits)
