"""Exponential sums over restricted sets and primes, and the digit-column counts.

Phases are reduced modulo 1 before the trigonometric call. For rational
arguments (``Fraction`` or ``int``) the reduction is exact integer arithmetic;
floats are converted exactly to their dyadic rational first.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from .digitset import DigitSystem, RestrictedSet, contains, enumerate_members
from .errors import InvariantError, SizeError
from .primes import PrimeTable

Real = Union[float, int, Fraction]

TUPLE_CAP = 10**8
GRID_CAP = 1 << 27
TWO_PI = 2.0 * math.pi


def e(x: Real) -> complex:
    """e(x) = exp(2 pi i x), with x reduced mod 1 exactly first."""
    frac = Fraction(x) % 1
    return cmath.exp(1j * TWO_PI * float(frac))


def _phases(values: np.ndarray, alpha: Real) -> np.ndarray:
    """(values * alpha) mod 1 as float64, reduced in exact arithmetic."""
    a = Fraction(alpha)
    num, den = a.numerator % a.denominator, a.denominator
    values = np.asarray(values)
    if values.size and den < (1 << 62) and int(np.abs(values).max()) * num < (1 << 62):
        red = (values.astype(np.int64) * num) % den
        return red.astype(np.float64) / den
    red = (values.astype(object) * num) % den
    return np.array([float(Fraction(int(r), den)) for r in red.ravel()]).reshape(values.shape)


def _esum(values: np.ndarray, alpha: Real, weights=None) -> complex:
    ph = np.exp(1j * TWO_PI * _phases(values, alpha))
    if weights is None:
        return complex(ph.sum())
    return complex(np.dot(ph, weights))


def eval_f(rset: RestrictedSet, alpha: Real) -> complex:
    """f(alpha) = sum over the set of e(n alpha), as a product over digit places."""
    digits = np.array(rset.digits, dtype=np.int64)
    out = 1.0 + 0j
    a = Fraction(alpha)
    for j in range(rset.k):
        out *= _esum(digits, a * rset.base**j)
    return out


def eval_f_direct(rset: RestrictedSet, alpha: Real) -> complex:
    """Term-by-term sum over the enumerated set (oracle for ``eval_f``)."""
    return _esum(enumerate_members(rset), alpha)


def f_grid(rset: RestrictedSet, N: int) -> np.ndarray:
    """f(j/N) for j = 0..N-1 via the digit product, phases reduced mod N in integers."""
    if N > GRID_CAP:
        raise SizeError(f"grid size {N} exceeds the cap {GRID_CAP}")
    roots = np.exp(1j * TWO_PI * np.arange(N) / N)
    j = np.arange(N, dtype=np.int64)
    out = np.ones(N, dtype=np.complex128)
    for place in range(rset.k):
        col = np.zeros(N, dtype=np.complex128)
        for d in rset.digits:
            c = (d * pow(rset.base, place, N)) % N
            col += roots[(c * j) % N]
        out *= col
    return out


def eval_S(table: PrimeTable, alpha: Real) -> complex:
    """S(alpha) = sum over table primes of e(p alpha) log p."""
    if table.primes.size == 0:
        return 0j
    return _esum(table.primes, alpha, table.weights)


@dataclass(frozen=True, eq=False)
class SignVector:
    """eta(n) in {-1, 0, +1} on (even) members; absent keys count as 0."""

    n: np.ndarray
    eta: np.ndarray

    @classmethod
    def from_mapping(cls, signs: Mapping[int, int]) -> "SignVector":
        keys = sorted(signs)
        return cls(np.array(keys, dtype=np.int64), np.array([signs[k] for k in keys], dtype=np.int64))

    def as_dict(self) -> dict[int, int]:
        return {int(a): int(b) for a, b in zip(self.n, self.eta)}


def _restrict_signs(rset: RestrictedSet, signs: SignVector) -> tuple[np.ndarray, np.ndarray]:
    n, eta = signs.n, signs.eta
    keep = (n > 0) & (n < rset.X) & (eta != 0)
    n, eta = n[keep], eta[keep]
    if n.size:
        members = np.array([contains(rset, int(v)) for v in n], dtype=bool)
        n, eta = n[members], eta[members]
    return n, eta


def eval_K(rset: RestrictedSet, signs: SignVector, alpha: Real) -> complex:
    """K(alpha) = sum over members 0 < n < X of eta(n) e(-n alpha)."""
    n, eta = _restrict_signs(rset, signs)
    if n.size == 0:
        return 0j
    return _esum(n, -Fraction(alpha), eta.astype(np.float64))


def K_grid(rset: RestrictedSet, signs: SignVector, N: int) -> np.ndarray:
    """K(j/N) for j = 0..N-1 (one FFT of the signed indicator)."""
    n, eta = _restrict_signs(rset, signs)
    if n.size and int(n.max()) >= N:
        raise SizeError(f"grid size N = {N} must exceed the largest signed member {int(n.max())}")
    v = np.zeros(N)
    v[n] = eta
    # numpy's forward transform carries e(-jn/N), matching the sign in K
    return np.fft.fft(v)


# -- digit columns ------------------------------------------------------------


def digit_sum_at(system: DigitSystem, a: int) -> complex:
    """sum over d in D of e(d a / b)."""
    b = system.base
    return sum(cmath.exp(1j * TWO_PI * ((d * a) % b) / b) for d in system.digits)


def u_column(system: DigitSystem, s: int, n: int) -> float:
    """Number of 2s-tuples of digits with sum(x_i - y_i) = n (mod b), via characters."""
    b = system.base
    total = 0j
    for a in range(b):
        mag = abs(digit_sum_at(system, a)) ** (2 * s)
        total += mag * cmath.exp(-1j * TWO_PI * ((n * a) % b) / b)
    total /= b
    if abs(total.imag) >= 1e-8 * system.size ** (2 * s):
        raise InvariantError(f"u_column imaginary residue {total.imag:g}")
    return total.real


def u_oracle(system: DigitSystem, s: int, n: int) -> int:
    """Exhaustive count of (x_1..x_s, y_1..y_s) in D^2s with sum(x_i - y_i) = n (mod b)."""
    return int(column_residue_counts(system, s)[n % system.base])


def column_residue_counts(system: DigitSystem, s: int) -> np.ndarray:
    """Residue histogram of sum(x_i - y_i) mod b over every tuple in D^2s."""
    b = system.base
    if system.size ** (2 * s) > TUPLE_CAP:
        raise SizeError(f"|D|^(2s) = {system.size ** (2 * s)} exceeds the tuple cap {TUPLE_CAP}")
    d = np.array(system.digits, dtype=np.int16)
    sums = np.zeros(1, dtype=np.int16)
    for sign in itertools.chain([1] * s, [-1] * s):
        sums = ((sums[:, None] + sign * d[None, :]) % b).astype(np.int16).ravel()
    return np.bincount(sums, minlength=b)


def u_column_majorant(system: DigitSystem, s: int) -> float:
    """(1/b) sum over a of |sum_d e(da/b)|^2s, the n-free form (equals u at n = 0)."""
    b = system.base
    return sum(abs(digit_sum_at(system, a)) ** (2 * s) for a in range(b)) / b


def u_max(system: DigitSystem, s: int) -> float:
    return max(u_column(system, s, n) for n in range(system.base))


def u_max_ratio(system: DigitSystem, s: int) -> float:
    """b * max_n u(n) / |D|^2s; 1 means the column sums are equidistributed mod b.

    Evaluated with each character sum scaled by 1/|D| so large s cannot overflow.
    """
    b = system.base
    mags = [(abs(digit_sum_at(system, a)) / system.size) ** (2 * s) for a in range(b)]
    return max(
        sum(m * math.cos(TWO_PI * ((n * a) % b) / b) for a, m in enumerate(mags)) for n in range(b)
    )
