"""Even moments of the restricted-set generating function.

The 2s-th moment of f over [0, 1] counts solutions of
x_1 + ... + x_s = y_1 + ... + y_s with every variable in the set, i.e. the
sum over m of r_s(m)^2 where r_s(m) counts ordered s-tuples summing to m.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import ntt
from .digitset import RestrictedSet, enumerate_members, gcd_reduce
from .errors import DomainError, SizeError
from .expsum import K_grid, SignVector, f_grid, u_max

CAP_BITS = 40
SPECTRUM_LENGTH_CAP = 1 << 24
BOUND_SLACK = 1e-9


def check_cap(rset: RestrictedSet, s: int) -> None:
    if s < 1:
        raise DomainError(f"moment order s must be >= 1, got {s}")
    if s * rset.k * math.log2(rset.base) > CAP_BITS:
        raise SizeError(
            f"s*k*log2(b) = {s * rset.k * math.log2(rset.base):.3f} exceeds {CAP_BITS}"
        )


@dataclass(frozen=True, eq=False)
class SumSpectrum:
    """counts[i] = r_s(offset + i)."""

    s: int
    offset: int
    counts: np.ndarray

    def as_dict(self) -> dict[int, int]:
        nz = np.flatnonzero(self.counts)
        return {int(self.offset + i): int(self.counts[i]) for i in nz}

    @property
    def total(self) -> int:
        return sum(self.counts.tolist())


def sum_spectrum(rset: RestrictedSet, s: int) -> SumSpectrum:
    """Exact representation counts of s-fold sums of set members (NTT convolution)."""
    check_cap(rset, s)
    lo, hi = rset.min_member, rset.max_member
    length = s * (hi - lo) + 1
    if length > SPECTRUM_LENGTH_CAP:
        raise SizeError(f"spectrum length {length} exceeds {SPECTRUM_LENGTH_CAP}")
    ind = np.zeros(hi - lo + 1, dtype=np.int64)
    ind[enumerate_members(rset) - lo] = 1
    counts = ind
    for _ in range(s - 1):
        counts = ntt.convolve(counts, ind)
    return SumSpectrum(s, s * lo, counts)


def _sum_of_squares(counts: np.ndarray) -> int:
    c = counts[counts != 0]
    if c.size == 0:
        return 0
    peak = int(c.max())
    if peak * peak * c.size < (1 << 63):
        return int(np.dot(c, c))
    return sum(v * v for v in c.tolist())


def moment_by_columns(rset: RestrictedSet, s: int) -> int:
    """Same count by a carry automaton over digit columns, least significant first.

    Column j contributes sigma_j = sum(x_ij - y_ij); the running carry c must make
    c + sigma_j divisible by b and |c| never exceeds s. Exact for any k.
    """
    if s < 1:
        raise DomainError(f"moment order s must be >= 1, got {s}")
    b = rset.base
    # weights of sigma in [-s(b-1), s(b-1)] over all 2s-tuples of digits
    weights = {0: 1}
    for sign in [1] * s + [-1] * s:
        nxt: dict[int, int] = defaultdict(int)
        for v, c in weights.items():
            for d in rset.digits:
                nxt[v + sign * d] += c
        weights = nxt
    carries = {0: 1}
    for _ in range(rset.k):
        nxt = defaultdict(int)
        for c, cnt in carries.items():
            for sigma, w in weights.items():
                t = c + sigma
                if t % b == 0:
                    nxt[t // b] += cnt * w
        carries = nxt
    return carries.get(0, 0)


def moment(rset: RestrictedSet, s: int) -> int:
    """Exact integral of |f|^2s over [0, 1].

    Sum of squared spectrum counts; when the spectrum is too long to hold, the
    column carry automaton gives the same integer.
    """
    check_cap(rset, s)
    try:
        spec = sum_spectrum(rset, s)
    except SizeError:
        return moment_by_columns(rset, s)
    return _sum_of_squares(spec.counts)


def quadrature_size(rset: RestrictedSet, s: int) -> int:
    """Power of two N > 2 s max(A): the grid on which |f|^2s integrates exactly."""
    return 1 << (2 * s * rset.max_member).bit_length()


def moment_grid(rset: RestrictedSet, s: int, N: int | None = None) -> float:
    """(1/N) sum_j |f(j/N)|^2s, the floating-point oracle for ``moment``."""
    N = quadrature_size(rset, s) if N is None else N
    vals = np.abs(f_grid(rset, N)) ** (2 * s)
    return math.fsum(vals) / N


def signed_moment_grid(rset: RestrictedSet, signs: SignVector, s: int, N: int | None = None) -> float:
    """(1/N) sum_j |K(j/N)|^2s for a sign vector on the set."""
    N = quadrature_size(rset, s) if N is None else N
    vals = np.abs(K_grid(rset, signs, N)) ** (2 * s)
    return math.fsum(vals) / N


class MomentBound(NamedTuple):
    moment: int
    bound: float
    holds: bool
    gcd: int


def column_bound(rset: RestrictedSet, s: int) -> tuple[int, float]:
    """(g, (max_n u(n))^k) computed on the digits divided by their gcd g."""
    g, reduced = gcd_reduce(rset.system)
    return g, u_max(reduced, s) ** rset.k


def moment_bound(rset: RestrictedSet, s: int) -> MomentBound:
    m = moment(rset, s)
    g, bound = column_bound(rset, s)
    return MomentBound(m, bound, m <= bound * (1 + BOUND_SLACK), g)
