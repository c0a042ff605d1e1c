"""Compiled inner loops for per-trial solvability decisions.

The Monte Carlo harness decides solvability millions of times, so the exact
rank computation is specialized here for int64 and jitted.  Duplicate rows
are collapsed first: a duplicated row is never solvable, and when the
deduplicated matrix has full row rank a single elimination settles every
user.  Results are bit-identical to the reference path in ``preambles``.

int64 is safe because Bareiss intermediates are minors of the 0/1 input,
bounded by L**(n/2) for selection rows with L ones (Hadamard); callers
check that bound and fall back to arbitrary precision otherwise.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .preambles import SelectionMatrix, solvability


@numba.njit(cache=True)
def _rank_bareiss(a):
    rows, cols = a.shape
    r = 0
    prev = np.int64(1)
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        arc = a[r, c]
        for i in range(r + 1, rows):
            f = a[i, c]
            for j in range(cols):
                a[i, j] = (arc * a[i, j] - f * a[r, j]) // prev
        prev = arc
        r += 1
    return r


@numba.njit(cache=True)
def _solvability_codes(idx0, K):
    """Solvability flags and rank from 0-based indices (N x L)."""
    N, L = idx0.shape
    codes = np.empty(N, np.int64)
    for n in range(N):
        c = np.int64(0)
        for l in range(L):
            c = c * K + idx0[n, l]
        codes[n] = c
    order = np.argsort(codes)
    # group identical codes: uid[n] = dense id of codes[n], counts per id
    uid = np.empty(N, np.int64)
    d = 0
    for k in range(N):
        if k > 0 and codes[order[k]] == codes[order[k - 1]]:
            uid[order[k]] = d - 1
        else:
            uid[order[k]] = d
            d += 1
    counts = np.zeros(d, np.int64)
    first = np.empty(d, np.int64)
    for n in range(N):
        counts[uid[n]] += 1
        first[uid[n]] = n
    # deduplicated binary matrix
    D = np.zeros((d, K * L), np.int64)
    for u in range(d):
        n = first[u]
        for l in range(L):
            D[u, idx0[n, l] + K * l] = 1
    rank = _rank_bareiss(D.copy())
    solvable = np.zeros(N, np.bool_)
    if rank == d:
        # distinct rows independent: solvable iff not duplicated
        for n in range(N):
            solvable[n] = counts[uid[n]] == 1
    else:
        # Eliminate [D | I]; rows whose D-part vanishes carry a basis of the
        # left null space in the I-part (columns track original rows through
        # swaps).  Row u is in the span of the others iff some null vector
        # has a nonzero u-th coordinate.
        cols = K * L
        aug = np.zeros((d, cols + d), np.int64)
        aug[:, :cols] = D
        for u in range(d):
            aug[u, cols + u] = 1
        r = 0
        prev = np.int64(1)
        for c in range(cols):
            if r == d:
                break
            piv = -1
            for i in range(r, d):
                if aug[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols + d):
                    tmp = aug[r, j]
                    aug[r, j] = aug[piv, j]
                    aug[piv, j] = tmp
            arc = aug[r, c]
            for i in range(r + 1, d):
                f = aug[i, c]
                for j in range(cols + d):
                    aug[i, j] = (arc * aug[i, j] - f * aug[r, j]) // prev
            prev = arc
            r += 1
        for u in range(d):
            if counts[u] != 1:
                continue
            dependent = False
            for i in range(rank, d):
                if aug[i, cols + u] != 0:
                    dependent = True
                    break
            solvable[first[u]] = not dependent
    return solvable, rank


def _i64_safe(K: int, L: int, N: int) -> bool:
    # code packing and Bareiss minors must both fit in int64
    if L * math.log2(K) >= 62:
        return False
    k = min(N, K * L)
    return k * math.log2(max(L, 2)) / 2 < 62


def fast_solvability(indices: np.ndarray, K: int) -> tuple[np.ndarray, int]:
    """(solvable_mask, rank) for a 1-based N x L index array.

    Same contract as ``preambles.solvability``; uses the jitted kernel when
    int64 arithmetic is provably exact, the reference path otherwise.
    """
    N, L = indices.shape
    if _i64_safe(K, L, N):
        idx0 = np.ascontiguousarray(indices, dtype=np.int64) - 1
        solvable, rank = _solvability_codes(idx0, K)
        return np.asarray(solvable, dtype=bool), int(rank)
    report = solvability(SelectionMatrix(K=K, L=L, N=N, indices=np.asarray(indices)))
    return report.solvable_mask, report.rank
