"""Exact integer convolution by number-theoretic transforms and CRT.

Two NTT-friendly primes give exact results for outputs below their product
(about 2**56), which covers every spectrum allowed by the moment cap.
"""
from __future__ import annotations

import numpy as np

# (prime, primitive root, largest supported log2 length)
PRIMES = ((469762049, 3, 26), (167772161, 3, 25))
EXACT_LIMIT = PRIMES[0][0] * PRIMES[1][0]
MAX_LOG_LENGTH = min(p[2] for p in PRIMES)


def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _root_powers(root: int, count: int, p: int) -> np.ndarray:
    out = np.ones(max(count, 1), dtype=np.int64)
    step, filled = root % p, 1
    while filled < count:
        take = min(filled, count - filled)
        out[filled : filled + take] = out[:take] * step % p
        step = step * step % p
        filled += take
    return out[:count]


def ntt(a: np.ndarray, p: int, g: int, inverse: bool = False) -> np.ndarray:
    n = a.shape[0]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    a = a[_bit_reverse(n)] % p
    root = pow(g, (p - 1) // n, p)
    if inverse:
        root = pow(root, p - 2, p)
    table = _root_powers(root, n // 2, p)
    length = 2
    while length <= n:
        half = length // 2
        tw = table[:: n // length][:half]
        blocks = a.reshape(-1, length)
        u = blocks[:, :half].copy()
        v = blocks[:, half:] * tw % p
        blocks[:, :half] = (u + v) % p
        blocks[:, half:] = (u - v) % p
        length *= 2
    if inverse:
        a = a * pow(n, p - 2, p) % p
    return a


def convolve(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Exact linear convolution of non-negative int64 vectors.

    The caller guarantees every output coefficient is below ``EXACT_LIMIT``.
    """
    out_len = x.shape[0] + y.shape[0] - 1
    n = 1 << max(out_len - 1, 1).bit_length()
    if n.bit_length() - 1 > MAX_LOG_LENGTH:
        raise ValueError(f"convolution length {n} too long for the NTT primes")
    residues = []
    for p, g, _ in PRIMES:
        fx = ntt(np.pad(x, (0, n - x.shape[0])), p, g)
        fy = ntt(np.pad(y, (0, n - y.shape[0])), p, g)
        residues.append(ntt(fx * fy % p, p, g, inverse=True)[:out_len])
    (p1, _, _), (p2, _, _) = PRIMES
    a1, a2 = residues
    t = (a2 - a1) % p2 * pow(p1, -1, p2) % p2
    return a1 + p1 * t
