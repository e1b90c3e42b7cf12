"""Compiled enumeration kernels for the finite-field census.

Everything here mirrors the pure-Python reference paths in census.py; the
kernels exist only to make exhaustive scans of tens of millions of forms
finish in seconds.  All kernels release the GIL so disjoint index ranges can
run on threads and be merged by addition.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(nogil=True, cache=False)
def _rank_mod(mat, n, q, inverses):
    rank = 0
    row = 0
    for col in range(n):
        pivot = -1
        for r in range(row, n):
            if mat[r, col] != 0:
                pivot = r
                break
        if pivot == -1:
            continue
        if pivot != row:
            for c in range(col, n):
                tmp = mat[row, c]
                mat[row, c] = mat[pivot, c]
                mat[pivot, c] = tmp
        inv = inverses[mat[row, col]]
        for r in range(row + 1, n):
            factor = (mat[r, col] * inv) % q
            if factor != 0:
                for c in range(col, n):
                    mat[r, c] = (mat[r, c] - factor * mat[row, c]) % q
        row += 1
        rank += 1
        if row == n:
            break
    return rank


@njit(nogil=True, cache=False)
def census_range(q, n, start, stop, inverses, counts):
    """Tally Gram ranks of every coefficient vector with index in [start, stop).

    Coefficient vectors are ordered lexicographically with the first cell
    (the coefficient of x_0^2) most significant, so fixing a prefix yields a
    contiguous index range.
    """
    ncoef = n * (n + 1) // 2
    digits = np.zeros(ncoef, np.int64)
    t = start
    for k in range(ncoef - 1, -1, -1):
        digits[k] = t % q
        t //= q
    mat = np.zeros((n, n), np.int64)
    half = (q + 1) // 2
    for _ in range(stop - start):
        p = 0
        for i in range(n):
            mat[i, i] = digits[p]
            p += 1
            for j in range(i + 1, n):
                v = (digits[p] * half) % q
                mat[i, j] = v
                mat[j, i] = v
                p += 1
        counts[_rank_mod(mat, n, q, inverses)] += 1
        k = ncoef - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] == q:
                digits[k] = 0
                k -= 1
            else:
                break


@njit(nogil=True, cache=False)
def isometry_count_range(q, n, start, stop, polar, inverses):
    """Count matrices g in the index range with g^T B g == B and g invertible."""
    nn = n * n
    digits = np.zeros(nn, np.int64)
    t = start
    for k in range(nn - 1, -1, -1):
        digits[k] = t % q
        t //= q
    g = np.zeros((n, n), np.int64)
    work = np.zeros((n, n), np.int64)
    gcopy = np.zeros((n, n), np.int64)
    count = 0
    for _ in range(stop - start):
        p = 0
        for i in range(n):
            for j in range(n):
                g[i, j] = digits[p]
                p += 1
        # work = B g, then compare g^T work against B entrywise
        ok = True
        for i in range(n):
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc += polar[i, k] * g[k, j]
                work[i, j] = acc % q
        for i in range(n):
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc += g[k, i] * work[k, j]
                if acc % q != polar[i, j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for i in range(n):
                for j in range(n):
                    gcopy[i, j] = g[i, j]
            if _rank_mod(gcopy, n, q, inverses) == n:
                count += 1
        k = nn - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] == q:
                digits[k] = 0
                k -= 1
            else:
                break
    return count
