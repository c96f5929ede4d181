"""Log-weighted primes in (P, X) and exact Goldbach representation counts."""
from __future__ import annotations

import math
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .digitset import RestrictedSet, enumerate_members
from .errors import ConfigurationError, DomainError, InvariantError, SizeError

X_CAP = 10**9
DEFAULT_DELTA0 = 0.05
SEGMENT = 1 << 20  # odd numbers per sieve segment; multiple of 8 keeps packing aligned

CACHE_MAGIC = b"DGPRIMES1"


def cutoff_for(X: int, delta0: float) -> int:
    """floor(X**(6*delta0)), nudged so exact powers are not floored one too low."""
    return int(math.floor(X ** (6 * delta0) * (1 + 1e-12)))


def _small_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a plain sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def odd_sieve_bits(X: int, P: int) -> np.ndarray:
    """Little-endian packed bitmap: bit i set iff 2i+1 is prime and P < 2i+1 < X.

    Segmented over odd numbers so memory stays at O(sqrt X + SEGMENT).
    """
    n_odd = X // 2  # odd numbers below X
    base = _small_primes(math.isqrt(max(X - 1, 0)))[1:]  # odd base primes
    chunks = []
    for lo in range(0, n_odd, SEGMENT):
        hi = min(lo + SEGMENT, n_odd)
        seg = np.ones(hi - lo, dtype=bool)
        v_lo, v_hi = 2 * lo + 1, 2 * hi - 1
        for p in base:
            p = int(p)
            if p * p > v_hi:
                break
            start = max(p * p, (v_lo + p - 1) // p * p)
            if start % 2 == 0:
                start += p
            seg[(start - 1) // 2 - lo :: p] = False
        if lo == 0:
            seg[0] = False  # 1 is not prime
        # cutoff: drop odd values <= P
        cut = (P + 1) // 2 - lo  # index of the first odd value > P
        if cut > 0:
            seg[: min(cut, hi - lo)] = False
        chunks.append(np.packbits(seg, bitorder="little"))
    if not chunks:
        return np.zeros(0, dtype=np.uint8)
    return np.concatenate(chunks)


@dataclass(frozen=True, eq=False)
class PrimeTable:
    X: int
    P: int
    primes: np.ndarray
    weights: np.ndarray = field(repr=False)
    bits: np.ndarray = field(repr=False)

    @property
    def has_two(self) -> bool:
        return self.P < 2 < self.X

    def contains(self, values) -> np.ndarray:
        """Vectorised membership: value is a table prime."""
        v = np.asarray(values, dtype=np.int64)
        ok = (v > self.P) & (v < self.X)
        odd = ok & (v % 2 == 1)
        idx = np.where(odd, v >> 1, 0)
        bit = (self.bits[idx >> 3] >> (idx & 7).astype(np.uint8)) & 1
        return (odd & (bit == 1)) | (ok & (v == 2))

    @property
    def weight_sum(self) -> float:
        return math.fsum(self.weights)


def _table_from_bits(X: int, P: int, bits: np.ndarray) -> PrimeTable:
    odd = np.flatnonzero(np.unpackbits(bits, bitorder="little")[: X // 2])
    primes = 2 * odd.astype(np.int64) + 1
    if P < 2 < X:
        primes = np.concatenate([[2], primes]).astype(np.int64)
    primes.setflags(write=False)
    weights = np.log(primes.astype(np.float64))
    weights.setflags(write=False)
    bits.setflags(write=False)
    return PrimeTable(X, P, primes, weights, bits)


def build_table(X: int, delta0: float = DEFAULT_DELTA0, *, cutoff: int | None = None) -> PrimeTable:
    """Primes p with P < p < X and their natural-log weights.

    P defaults to floor(X**(6*delta0)); ``cutoff`` overrides it directly.
    """
    X = int(X)
    if X > X_CAP:
        raise SizeError(f"X = {X} exceeds the desk cap {X_CAP}")
    if X < 4:
        raise DomainError(f"X must be >= 4, got {X}")
    if cutoff is None:
        if not 0 < delta0 < 1 / 6:
            raise DomainError(f"delta0 must lie in (0, 1/6), got {delta0}")
        P = cutoff_for(X, delta0)
    else:
        P = int(cutoff)
    if not 0 <= P < X:
        raise ConfigurationError(f"cutoff P = {P} must satisfy 0 <= P < X = {X}")
    return _table_from_bits(X, P, odd_sieve_bits(X, P))


# -- cache file -------------------------------------------------------------
# magic | X (u64 LE) | P (u64 LE) | packed odd sieve | crc32 (u32 LE) of everything before


def write_cache(table: PrimeTable, path: str | Path) -> None:
    body = CACHE_MAGIC + struct.pack("<QQ", table.X, table.P) + table.bits.tobytes()
    Path(path).write_bytes(body + struct.pack("<I", zlib.crc32(body)))


def read_cache(path: str | Path, X: int, P: int) -> PrimeTable | None:
    """Load a cached table, or None when missing, stale for (X, P), or corrupt."""
    path = Path(path)
    if not path.exists():
        return None
    raw = path.read_bytes()
    head = len(CACHE_MAGIC) + 16
    if len(raw) < head + 4 or not raw.startswith(CACHE_MAGIC):
        return None
    body, (crc,) = raw[:-4], struct.unpack("<I", raw[-4:])
    if zlib.crc32(body) != crc:
        return None
    cx, cp = struct.unpack("<QQ", raw[len(CACHE_MAGIC) : head])
    if (cx, cp) != (X, P):
        return None
    bits = np.frombuffer(body[head:], dtype=np.uint8).copy()
    if len(bits) != (X // 2 + 7) // 8:
        return None
    return _table_from_bits(X, P, bits)


def load_or_build(X: int, P: int, path: str | Path | None) -> PrimeTable:
    if path is not None:
        cached = read_cache(path, X, P)
        if cached is not None:
            return cached
    table = build_table(X, cutoff=P)
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        write_cache(table, path)
    return table


# -- representations --------------------------------------------------------


@dataclass(frozen=True)
class GoldbachRecord:
    n: int
    R_weighted: float
    rep_count: int

    @property
    def is_exception(self) -> bool:
        return self.rep_count == 0


def weighted_rep(table: PrimeTable, n: int) -> GoldbachRecord:
    """Ordered pairs p1 + p2 = n of table primes and their sum of log p1 log p2."""
    n = int(n)
    if n % 2:
        raise DomainError(f"n must be even, got {n}")
    if not 0 < n < 2 * table.X:
        raise DomainError(f"n = {n} outside (0, 2X) for X = {table.X}")
    hi = np.searchsorted(table.primes, n, side="left")
    p = table.primes[:hi]
    hit = table.contains(n - p)
    if not hit.any():
        return GoldbachRecord(n, 0.0, 0)
    w1 = table.weights[:hi][hit]
    w2 = np.log((n - p[hit]).astype(np.float64))
    return GoldbachRecord(n, math.fsum(w1 * w2), int(hit.sum()))


@dataclass(frozen=True)
class ScanResult:
    scanned: int
    exceptions: list[GoldbachRecord]
    cardinality: int

    @property
    def exception_count(self) -> int:
        return len(self.exceptions)


def unrepresented(table: PrimeTable, evens: np.ndarray) -> np.ndarray:
    """The numbers in ``evens`` that are not p1 + p2 with both primes in the table.

    Walks the primes upward and retires each n as soon as n - p is a table prime,
    so the typical cost is a few vector passes rather than pi(X) work per n.
    """
    pending = np.asarray(evens, dtype=np.int64)
    final = []
    for p in table.primes:
        if pending.size == 0:
            break
        # once n - p <= P no larger p can help: n is settled as unrepresented
        alive = pending - p > table.P
        final.append(pending[~alive])
        pending = pending[alive]
        pending = pending[~table.contains(pending - p)]
    final.append(pending)
    out = np.concatenate(final)
    out.sort()
    return out


def exception_scan(
    rset: RestrictedSet,
    table: PrimeTable,
    *,
    min_n: int = 4,
    threads: int = 1,
    chunk: int = 1 << 18,
) -> ScanResult:
    """Even members n >= min_n of the set that are not p1 + p2 with table primes."""
    if rset.X != table.X:
        raise ConfigurationError(f"set has X = {rset.X} but the prime table has X = {table.X}")
    members = enumerate_members(rset)
    evens = members[(members % 2 == 0) & (members >= min_n)].astype(np.int64)
    parts = [evens[i : i + chunk] for i in range(0, evens.size, chunk)]
    if threads > 1 and len(parts) > 1:
        with ThreadPoolExecutor(threads) as pool:
            found = list(pool.map(lambda e: unrepresented(table, e), parts))
    else:
        found = [unrepresented(table, e) for e in parts]
    bad = np.concatenate(found) if found else np.zeros(0, dtype=np.int64)
    bad.sort()
    records = [weighted_rep(table, int(n)) for n in bad]
    if any(r.rep_count for r in records):
        raise InvariantError("scan flagged an n that has a representation")
    return ScanResult(int(evens.size), records, rset.cardinality)
