"""Digitally restricted integers: sets of k-digit base-b numbers with digits in D.

A member of the set has exactly k digit positions (leading zeros allowed when
0 is an allowed digit), so the set has |D|**k elements, all below X = b**k.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np
from numba import njit

from .errors import DomainError, SizeError

ENUMERATION_CAP = 10**8
DIVISOR_CAP = 10**12
# residue vectors up to this length use the compiled dense kernel
DENSE_MODULUS_LIMIT = 1 << 24
SPARSE_STATE_LIMIT = 10**7
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class DigitSystem:
    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.base, (int, np.integer)) or self.base < 2:
            raise DomainError(f"base must be an integer >= 2, got {self.base!r}")
        digits = tuple(int(d) for d in self.digits)
        for d in digits:
            if not 0 <= d < self.base:
                raise DomainError(f"digit {d} is not in [0, {self.base})")
        if len(set(digits)) != len(digits):
            raise DomainError(f"digits must be distinct, got {list(digits)}")
        if len(digits) < 2:
            raise DomainError("at least two allowed digits are required")
        object.__setattr__(self, "base", int(self.base))
        object.__setattr__(self, "digits", tuple(sorted(digits)))

    @property
    def size(self) -> int:
        return len(self.digits)

    @property
    def gcd(self) -> int:
        """gcd of the allowed digits (zero contributes nothing)."""
        return reduce(math.gcd, self.digits)

    @property
    def dimension(self) -> float:
        """log|D| / log b, the exponent in the multiples bound."""
        return math.log(self.size) / math.log(self.base)


@dataclass(frozen=True)
class RestrictedSet:
    system: DigitSystem
    k: int

    def __post_init__(self) -> None:
        if int(self.k) < 1:
            raise DomainError(f"digit count k must be >= 1, got {self.k}")
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def of(cls, base: int, digits: Sequence[int], k: int) -> "RestrictedSet":
        return cls(DigitSystem(base, tuple(digits)), k)

    @property
    def base(self) -> int:
        return self.system.base

    @property
    def digits(self) -> tuple[int, ...]:
        return self.system.digits

    @property
    def X(self) -> int:
        return self.system.base**self.k

    @property
    def cardinality(self) -> int:
        return self.system.size**self.k

    @property
    def min_member(self) -> int:
        d = self.digits[0]
        return d * (self.X - 1) // (self.base - 1)

    @property
    def max_member(self) -> int:
        d = self.digits[-1]
        return d * (self.X - 1) // (self.base - 1)


def enumerate_members(rset: RestrictedSet, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """All members in ascending order.

    Built most-significant digit first: prefix * b + d is ascending whenever the
    prefixes are ascending and D is sorted, so no sort is needed.
    """
    if rset.cardinality > cap:
        raise SizeError(
            f"|D|^k = {rset.cardinality} exceeds the enumeration cap {cap}"
        )
    dtype = np.int64 if rset.X < _INT64_SAFE else object
    digits = np.array(rset.digits, dtype=dtype)
    out = digits.copy()
    for _ in range(rset.k - 1):
        out = (out[:, None] * rset.base + digits[None, :]).ravel()
    return out


def contains(rset: RestrictedSet, n: int) -> bool:
    n = int(n)
    if n < 0 or n >= rset.X:
        return False
    allowed = set(rset.digits)
    for _ in range(rset.k):
        n, d = divmod(n, rset.base)
        if d not in allowed:
            return False
    return True


@njit(cache=True)
def _prefix_histogram(digits, base, levels, m):
    """Histogram over residues mod m of all digit prefixes of the given length."""
    nd = digits.shape[0]
    # with base and digits reduced, rb + d < 2m for every state
    base = base % m
    digits = digits % m
    # sparse phase: list every prefix residue while there are at most m of them
    buf = np.zeros(m + 1, np.int64)
    n = 1
    level = 0
    while level < levels and n * nd <= m:
        for i in range(n - 1, -1, -1):
            vb = (buf[i] * base) % m
            for j in range(nd - 1, -1, -1):
                t = vb + digits[j]
                if t >= m:
                    t -= m
                buf[i * nd + j] = t
        n *= nd
        level += 1
    cur = np.zeros(m, np.int64)
    for i in range(n):
        cur[buf[i]] += 1
    nxt = np.zeros(m, np.int64)
    for _ in range(level, levels):
        nxt[:] = 0
        rb = 0
        for r in range(m):
            c = cur[r]
            if c != 0:
                for j in range(nd):
                    t = rb + digits[j]
                    if t >= m:
                        t -= m
                    nxt[t] += c
            rb += base
            if rb >= m:
                rb -= m
        cur, nxt = nxt, cur
    return cur


@njit(cache=True)
def _inverse_mod(a, m):
    # a and m coprime, m >= 1
    if m == 1:
        return 0
    r0, r1 = a % m, m
    s0, s1 = 1, 0
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % m


@njit(cache=True)
def _count_zero_residue(digits, base, k, m):
    cur = _prefix_histogram(digits, base, k - 1, m)
    # last digit: solve r*b + d = 0 (mod m) for r instead of scattering all m states
    g = m
    a = base
    while a != 0:
        g, a = a, g % a
    mg = m // g
    inv = _inverse_mod((base // g) % mg, mg)
    total = 0
    for d in digits:
        target = (-d) % m
        if target % g != 0:
            continue
        r = ((target // g) * inv) % mg
        while r < m:
            total += cur[r]
            r += mg
    return total


def _sparse_residue_counts(rset: RestrictedSet, m: int) -> Counter:
    states: Counter = Counter({0: 1})
    b = rset.base
    for _ in range(rset.k):
        nxt: Counter = Counter()
        for r, c in states.items():
            rb = r * b
            for d in rset.digits:
                nxt[(rb + d) % m] += c
        if len(nxt) > SPARSE_STATE_LIMIT:
            raise SizeError(f"digit DP for m={m} needs more than {SPARSE_STATE_LIMIT} states")
        states = nxt
    return states


def _use_dense(rset: RestrictedSet, m: int) -> bool:
    return (
        m <= DENSE_MODULUS_LIMIT
        and rset.cardinality < _INT64_SAFE
        and m * rset.base < _INT64_SAFE
    )


def residue_counts(rset: RestrictedSet, m: int) -> np.ndarray:
    """counts[c] = #{n in the set : n = c (mod m)} for c < m."""
    if m < 1:
        raise DomainError(f"modulus must be >= 1, got {m}")
    if _use_dense(rset, m):
        digits = np.array(rset.digits, dtype=np.int64)
        return _prefix_histogram(digits, rset.base, rset.k, m)
    if m > DENSE_MODULUS_LIMIT:
        raise SizeError(f"residue histogram of length {m} is too large")
    out = np.zeros(m, dtype=object)
    for r, c in _sparse_residue_counts(rset, m).items():
        out[r] = c
    return out


def count_multiples(rset: RestrictedSet, m: int) -> int:
    """#{n in the set : m | n} via a residue automaton over the digits."""
    m = int(m)
    if m < 1:
        raise DomainError(f"modulus must be >= 1, got {m}")
    if m == 1:
        return rset.cardinality
    if _use_dense(rset, m):
        digits = np.array(rset.digits, dtype=np.int64)
        return int(_count_zero_residue(digits, rset.base, rset.k, m))
    return int(_sparse_residue_counts(rset, m).get(0, 0))


class SieveBound(NamedTuple):
    count: int
    bound: float
    holds: bool


# slack for the irrational exponent in the bound
BOUND_SLACK = 2.0**-40


def multiples_bound(rset: RestrictedSet, m: int) -> float:
    """2 b |A_k| / m**(log|D|/log b)."""
    s = rset.system
    log_bound = (
        math.log(2 * s.base) + rset.k * math.log(s.size) - math.log(m) * s.dimension
    )
    return math.exp(log_bound)


def sieve_bound_check(rset: RestrictedSet, m: int) -> SieveBound:
    count = count_multiples(rset, m)
    bound = multiples_bound(rset, m)
    return SieveBound(count, bound, count <= bound * (1 + BOUND_SLACK))


def divisors(r: int) -> list[int]:
    if r < 1:
        raise DomainError(f"divisors need r >= 1, got {r}")
    if r > DIVISOR_CAP:
        raise SizeError(f"r = {r} exceeds the divisor cap {DIVISOR_CAP}")
    small, large = [], []
    d = 1
    while d * d <= r:
        if r % d == 0:
            small.append(d)
            if d * d != r:
                large.append(r // d)
        d += 1
    return small + large[::-1]


def divisor_discard_count(rset: RestrictedSet, r: int, Y: float) -> int:
    """Sum over divisors d > Y of r of the number of multiples of d in the set.

    A union bound on the members sharing a factor larger than Y with r.
    """
    if Y < 1:
        raise DomainError(f"Y must be >= 1, got {Y}")
    return sum(count_multiples(rset, d) for d in divisors(int(r)) if d > Y)


def gcd_reduce(system: DigitSystem) -> tuple[int, DigitSystem]:
    """Divide every digit by their common factor.

    Only meaningful for counting additive solutions, where scaling all digits
    by g is a bijection on solution sets. It changes the set itself.
    """
    g = system.gcd
    if g <= 1:
        return 1, system
    return g, DigitSystem(system.base, tuple(d // g for d in system.digits))
