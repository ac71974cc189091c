# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) row reduction.

Matrices are C-contiguous ``int64`` arrays with entries already reduced to
``[0, p)``; ``p`` must be below ``2**31`` so products fit in 64 bits.
"""

cimport cython
from libc.stdint cimport int64_t

import numpy as np


cdef inline int64_t _inv(int64_t a, int64_t p) nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _pick(int64_t[:, ::1] a, Py_ssize_t row, Py_ssize_t col) nogil:
    # Markowitz-style choice: among rows with a nonzero in ``col`` take the
    # one with fewest nonzeros to the right.
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t best = -1, best_count = n + 1, i, k, count
    for i in range(row, m):
        if a[i, col] != 0:
            count = 0
            for k in range(col, n):
                if a[i, k] != 0:
                    count += 1
            if count < best_count:
                best = i
                best_count = count
    return best


cdef Py_ssize_t _eliminate(int64_t[:, ::1] a, int64_t p, bint full, Py_ssize_t[::1] pivots) nogil:
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t row = 0, col, i, k, piv, start
    cdef int64_t inv, f, tmp
    for col in range(n):
        if row >= m:
            break
        piv = _pick(a, row, col)
        if piv < 0:
            continue
        if piv != row:
            for k in range(col, n):
                tmp = a[row, k]
                a[row, k] = a[piv, k]
                a[piv, k] = tmp
        inv = _inv(a[row, col], p)
        if inv != 1:
            for k in range(col, n):
                a[row, k] = (a[row, k] * inv) % p
        start = 0 if full else row + 1
        for i in range(start, m):
            if i == row:
                continue
            f = a[i, col]
            if f == 0:
                continue
            for k in range(col, n):
                if a[row, k] != 0:
                    a[i, k] = (a[i, k] - f * a[row, k]) % p
                    if a[i, k] < 0:
                        a[i, k] += p
        pivots[row] = col
        row += 1
    return row


def rref_modp(a, long long p):
    """Reduce ``a`` in place to reduced row echelon form; return the pivot columns."""
    cdef int64_t[:, ::1] view = a
    cdef Py_ssize_t[::1] pivots = np.zeros(min(a.shape[0], a.shape[1]) + 1, dtype=np.intp)
    cdef Py_ssize_t r
    with nogil:
        r = _eliminate(view, p, True, pivots)
    return [int(pivots[i]) for i in range(r)]


def rank_modp(a, long long p):
    """Rank of ``a`` over GF(p); ``a`` is overwritten."""
    cdef int64_t[:, ::1] view = a
    cdef Py_ssize_t[::1] pivots = np.zeros(min(a.shape[0], a.shape[1]) + 1, dtype=np.intp)
    cdef Py_ssize_t r
    with nogil:
        r = _eliminate(view, p, False, pivots)
    return int(r)
