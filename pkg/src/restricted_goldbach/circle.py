"""Major/minor arc partition of [0, 1) and DFT-grid quadrature of r(n, B).

r(n, B) is the integral over B of S(alpha)^2 e(-n alpha). On the grid j/N with
N > 2X the trapezoid rule integrates S^2 e(-n .) exactly over the full circle,
so full-circle values reproduce the log-weighted prime pair counts, and the
major/minor values are the same grid sum split by arc membership.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from .digitset import RestrictedSet, enumerate_members
from .errors import ConfigurationError, DomainError, InvariantError, SizeError
from .expsum import K_grid, SignVector
from .primes import PrimeTable, cutoff_for, weighted_rep

Region = Literal["full", "major", "minor"]

GRID_CAP = 1 << 27
IMAG_TOL = 1e-9
IDENTITY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class ArcPartition:
    """alpha is major iff ||q alpha|| < width for some 1 <= q <= Q.

    ``lo``/``hi`` hold the merged open intervals covering the major arcs, with
    the arc around 0 stored as (-width, width) and the one around 1 as
    (1 - width, 1 + width) so that reduction mod 1 needs no special case.
    """

    X: int
    delta0: float
    Q: int
    width: float
    lo: np.ndarray = field(repr=False)
    hi: np.ndarray = field(repr=False)

    @property
    def intervals(self) -> list[tuple[float, float]]:
        return [(max(a, 0.0), min(b, 1.0)) for a, b in zip(self.lo, self.hi)]

    @property
    def measure(self) -> float:
        return float(np.sum(np.minimum(self.hi, 1.0) - np.maximum(self.lo, 0.0)))

    def classify(self, alpha) -> np.ndarray:
        """Major-arc membership by binary search in the interval list."""
        a = np.mod(np.asarray(alpha, dtype=np.float64), 1.0)
        idx = np.searchsorted(self.lo, a, side="right") - 1
        idx = np.clip(idx, 0, len(self.lo) - 1)
        return (a > self.lo[idx]) & (a < self.hi[idx])

    def classify_direct(self, alpha) -> np.ndarray:
        """Same membership through min over q <= Q of ||q alpha||."""
        a = np.asarray(alpha, dtype=np.float64)
        out = np.zeros(a.shape, dtype=bool)
        for q in range(1, self.Q + 1):
            t = np.mod(q * a, 1.0)
            out |= np.minimum(t, 1.0 - t) < self.width
        return out

    def grid_mask(self, N: int) -> np.ndarray:
        """Major-arc membership of the points j/N, exactly symmetric under j -> N - j."""
        half = N // 2
        j = np.arange(half + 1)
        m = self.classify(j / N)
        mask = np.empty(N, dtype=bool)
        mask[: half + 1] = m
        mask[half + 1 :] = m[1:half][::-1] if N > 2 else m[1:1]
        return mask


def farey_points(Q: int) -> list[Fraction]:
    """Reduced fractions a/q in [0, 1] with q <= Q, ascending."""
    pts = {Fraction(a, q) for q in range(1, Q + 1) for a in range(q + 1) if math.gcd(a, q) == 1}
    return sorted(pts)


def build_partition(X: int, delta0: float) -> ArcPartition:
    if not 0 < delta0 < 1 / 6:
        raise DomainError(f"delta0 must lie in (0, 1/6), got {delta0}")
    Q = cutoff_for(X, delta0)
    if Q < 1:
        raise ConfigurationError(f"arc denominator cap Q = {Q} < 1")
    width = float(X) ** (6 * delta0 - 1)
    return partition_from(X, delta0, Q, width)


def partition_from(X: int, delta0: float, Q: int, width: float) -> ArcPartition:
    if width * Q >= 0.5:
        raise ConfigurationError(
            f"degenerate arcs: width * Q = {width * Q:.4g} >= 1/2 covers the circle"
        )
    lo, hi = [], []
    for frac in farey_points(Q):
        c, r = float(frac), width / frac.denominator
        a, b = c - r, c + r
        # open intervals: merge only on genuine overlap
        if lo and a < hi[-1]:
            hi[-1] = max(hi[-1], b)
        else:
            lo.append(a)
            hi.append(b)
    part = ArcPartition(X, delta0, Q, width, np.array(lo), np.array(hi))
    if not part.measure < 1:
        raise ConfigurationError(f"major arcs have measure {part.measure} >= 1")
    return part


@dataclass(frozen=True, eq=False)
class GridTransform:
    N: int
    X: int
    S_values: np.ndarray = field(repr=False)
    weight_sq_sum: float

    @property
    def S_squared(self) -> np.ndarray:
        return self.S_values**2


def grid_size(X: int) -> int:
    """Smallest power of two exceeding 2X + 1."""
    return 1 << (2 * X + 1).bit_length()


def build_grid(table: PrimeTable, N: int | None = None) -> GridTransform:
    """S(j/N) for all j from one length-N DFT of the log-weighted prime indicator."""
    if N is None:
        N = grid_size(table.X)
    if N & (N - 1) or N <= 2 * table.X:
        raise ConfigurationError(f"N = {N} must be a power of two exceeding 2X = {2 * table.X}")
    if N > GRID_CAP:
        raise SizeError(f"grid size {N} exceeds the cap {GRID_CAP}")
    w = np.zeros(N)
    w[table.primes] = table.weights
    # S(j/N) = sum_p w_p e(p j / N) is N times the inverse DFT
    S = np.fft.ifft(w) * N
    S.flags.writeable = False
    return GridTransform(N, table.X, S, math.fsum(table.weights**2))


def _region_mask(grid: GridTransform, partition: ArcPartition, region: Region) -> np.ndarray | None:
    if region == "full":
        return None
    major = partition.grid_mask(grid.N)
    if region == "major":
        return major
    if region == "minor":
        return ~major
    raise DomainError(f"unknown region {region!r}")


def _check_real(values: np.ndarray, grid: GridTransform) -> None:
    # |imag| against sum (log p)^2 = (1/N) sum_j |S(j/N)|^2, the natural scale of r
    worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if worst > IMAG_TOL * max(1.0, grid.weight_sq_sum):
        raise InvariantError(f"quadrature imaginary residue {worst:g} is not negligible")


def r_quadrature(grid: GridTransform, partition: ArcPartition, n: int, region: Region = "full") -> float:
    """(1/N) sum over region grid points of S(j/N)^2 e(-n j/N)."""
    n = int(n)
    if not 0 < n < 2 * grid.X:
        raise DomainError(f"n = {n} outside (0, 2X) for X = {grid.X}")
    N = grid.N
    j = np.arange(N, dtype=np.int64)
    tw = np.exp(-2j * np.pi * ((n * j) % N) / N)
    integrand = grid.S_squared * tw
    mask = _region_mask(grid, partition, region)
    if mask is not None:
        integrand = integrand[mask]
    val = np.sum(integrand) / N
    _check_real(np.array([val]), grid)
    return float(val.real)


def r_all(grid: GridTransform, partition: ArcPartition | None, region: Region = "full") -> np.ndarray:
    """r(n, region) for every n in [0, N) with one forward FFT."""
    S2 = grid.S_squared
    mask = None if partition is None else _region_mask(grid, partition, region)
    if mask is not None:
        S2 = np.where(mask, S2, 0)
    vals = np.fft.fft(S2) / grid.N
    _check_real(vals, grid)
    return vals.real


def _even_members(rset: RestrictedSet) -> np.ndarray:
    m = enumerate_members(rset)
    return m[(m % 2 == 0) & (m > 0)].astype(np.int64)


@dataclass(frozen=True, eq=False)
class MinorArcAggregate:
    total: float
    integral: float
    signs: SignVector
    r_minor: np.ndarray
    histogram: tuple[np.ndarray, np.ndarray]


def minor_arc_aggregate(
    rset: RestrictedSet, grid: GridTransform, partition: ArcPartition, bins: int = 20
) -> MinorArcAggregate:
    """sum of |r(n, minor)| over even members, recomputed as an arc integral.

    With eta(n) = sign r(n, minor) and K(alpha) = sum eta(n) e(-n alpha), the
    sum equals the minor-arc integral of S(alpha)^2 K(alpha); both sides are
    evaluated on the same grid and must agree.
    """
    if rset.X != grid.X:
        raise ConfigurationError(f"set has X = {rset.X} but the grid was built for X = {grid.X}")
    evens = _even_members(rset)
    r_minor = r_all(grid, partition, "minor")[evens]
    eta = np.sign(r_minor).astype(np.int64)
    signs = SignVector(evens, eta)
    total = math.fsum(np.abs(r_minor))

    minor = ~partition.grid_mask(grid.N)
    K = K_grid(rset, signs, grid.N)
    integrand = (grid.S_squared * K)[minor]
    integral = np.sum(integrand) / grid.N
    _check_real(np.array([integral]), grid)
    integral = float(integral.real)
    if abs(integral - total) > IDENTITY_TOL * max(1.0, total):
        raise InvariantError(f"minor-arc identity failed: sum |r| = {total!r}, integral = {integral!r}")

    scaled = np.abs(r_minor) / rset.X
    hist = np.histogram(scaled, bins=bins) if scaled.size else (np.zeros(bins, int), np.linspace(0, 1, bins + 1))
    return MinorArcAggregate(total, integral, signs, r_minor, hist)


@dataclass(frozen=True)
class DominanceRow:
    n: int
    r_major: float
    r_minor: float
    r_full: float
    exact: float
    abs_error: float
    threshold: float
    major_positive: bool
    major_dominates: bool
    below_threshold: bool


def dominance_threshold(X: int, Y: float) -> float:
    """X Y^(-1/2) / log X."""
    return X / math.sqrt(Y) / math.log(X)


def dominance_report(
    rset: RestrictedSet, grid: GridTransform, partition: ArcPartition, table: PrimeTable, Y: float = 1.0
) -> list[DominanceRow]:
    """Per even member: major and minor arc values, the exact count, and flags."""
    if rset.X != grid.X or table.X != grid.X:
        raise ConfigurationError("set, prime table and grid must share X")
    if Y < 1:
        raise DomainError(f"Y must be >= 1, got {Y}")
    evens = _even_members(rset)
    major = r_all(grid, partition, "major")[evens]
    minor = r_all(grid, partition, "minor")[evens]
    full = r_all(grid, None, "full")[evens]
    thr = dominance_threshold(rset.X, Y)
    rows = []
    for n, rM, rm, rf in zip(evens.tolist(), major.tolist(), minor.tolist(), full.tolist()):
        exact = weighted_rep(table, n).R_weighted
        rows.append(
            DominanceRow(
                n=n,
                r_major=rM,
                r_minor=rm,
                r_full=rf,
                exact=exact,
                abs_error=abs(rf - exact),
                threshold=thr,
                major_positive=rM > 0,
                major_dominates=rM > abs(rm),
                below_threshold=rM < thr,
            )
        )
    return rows
