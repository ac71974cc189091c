"""Pure-Python GF(p) row reduction; same contract as the compiled ``_kernels``."""

from __future__ import annotations

import numpy as np


def _eliminate(rows: list[list[int]], p: int, full: bool) -> list[int]:
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = -1
        best = n + 1
        for i in range(row, m):
            if rows[i][col]:
                count = sum(1 for v in rows[i][col:] if v)
                if count < best:
                    piv, best = i, count
        if piv < 0:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        pr = rows[row]
        inv = pow(pr[col], -1, p)
        if inv != 1:
            pr = rows[row] = [v * inv % p for v in pr]
        nz = [k for k in range(col, n) if pr[k]]
        for i in range(0 if full else row + 1, m):
            if i == row:
                continue
            r = rows[i]
            f = r[col]
            if f:
                for k in nz:
                    r[k] = (r[k] - f * pr[k]) % p
        pivots.append(col)
        row += 1
    return pivots


def rref_modp(a: np.ndarray, p: int) -> list[int]:
    """Reduce ``a`` in place to reduced row echelon form; return the pivot columns."""
    rows = a.tolist()
    pivots = _eliminate(rows, p, True)
    if rows:
        a[...] = rows
    return pivots


def rank_modp(a: np.ndarray, p: int) -> int:
    """Rank of ``a`` over GF(p)."""
    return len(_eliminate(a.tolist(), p, False))
