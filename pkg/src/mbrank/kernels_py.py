"""Numpy fallback for the low-rank counting kernel.

rank <= r is decided by vanishing of all (r+1) x (r+1) minors, computed in
exact int64 arithmetic on batches of coefficient combinations (entries stay
below p, so the largest intermediate is bounded by m! * p^m, far under the
int64 range for the probe primes).
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

_CHUNK = 120_000


def count_low_rank(slices, p: int, r: int) -> int:
    sl = np.array(slices, dtype=np.int64) % p
    m, n, _ = sl.shape
    if r >= n:
        return p**m
    total = 0
    digits = np.arange(p, dtype=np.int64)
    count = p**m
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, count), dtype=np.int64)
        coeffs = np.empty((len(idx), m), dtype=np.int64)
        rest = idx.copy()
        for k in range(m):
            coeffs[:, k] = rest % p
            rest //= p
        mats = np.einsum("ck,kij->cij", coeffs, sl) % p
        ok = np.ones(len(idx), dtype=bool)
        for rows in combinations(range(n), r + 1):
            for cols in combinations(range(n), r + 1):
                sub = mats[:, rows, :][:, :, cols]
                ok &= _batched_det(sub) % p == 0
                if not ok.any():
                    break
            if not ok.any():
                break
        total += int(ok.sum())
    return total


def _batched_det(a: np.ndarray) -> np.ndarray:
    """Exact integer determinant of a (..., k, k) stack, k <= 5."""
    k = a.shape[-1]
    if k == 1:
        return a[..., 0, 0]
    if k == 2:
        return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    total = np.zeros(a.shape[:-2], dtype=np.int64)
    cols = list(range(k))
    sign = 1
    for j in range(k):
        minor_cols = cols[:j] + cols[j + 1 :]
        minor = a[..., 1:, :][..., :, minor_cols]
        total = total + sign * a[..., 0, j] * _batched_det(minor)
        sign = -sign
    return total
