"""Exact linear algebra over the rationals and prime fields.

Matrices are numpy arrays: ``object`` arrays of :class:`fractions.Fraction`
over Q, C-contiguous ``int64`` arrays with entries in ``[0, p)`` over GF(p).
Reduced row echelon forms are unique, so every basis derived from them
(kernels, cohomology representatives) depends only on the column order.

GF(p) elimination runs in the compiled ``_kernels`` extension when it is
importable, otherwise in ``_kernels_py``; set ``SPOSET_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from functools import lru_cache

import numpy as np

if os.environ.get("SPOSET_PURE_PYTHON"):
    from . import _kernels_py as _kern
    KERNEL = "python"
else:
    try:
        from . import _kernels as _kern  # type: ignore[attr-defined]
        KERNEL = "compiled"
    except ImportError:  # extension not built
        from . import _kernels_py as _kern
        KERNEL = "python"


class LinAlgError(ArithmeticError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _rref_q(rows: list[list[Fraction]], ncols: int) -> list[int]:
    m = len(rows)
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row >= m:
            break
        piv = -1
        best = ncols + 1
        for i in range(row, m):
            if rows[i][col]:
                count = sum(1 for v in rows[i][col:] if v)
                if count < best:
                    piv, best = i, count
        if piv < 0:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        pr = rows[row]
        lead = pr[col]
        if lead != 1:
            pr = rows[row] = [v / lead for v in pr]
        nz = [k for k in range(col, ncols) if pr[k]]
        for i in range(m):
            if i == row:
                continue
            r = rows[i]
            f = r[col]
            if f:
                for k in nz:
                    r[k] -= f * pr[k]
        pivots.append(col)
        row += 1
    return pivots


class Field:
    """The rationals (``p == 0``) or the prime field GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2**31:
            raise ValueError("prime fields are limited to p < 2**31")
        self.p = p

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    def __repr__(self) -> str:
        return f"Field({self.name})"

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"GF({self.p})"

    @property
    def characteristic(self) -> int:
        return self.p

    @classmethod
    def parse(cls, text: str | int | "Field") -> "Field":
        """Accepts ``Q``, ``QQ``, ``GF(p)``, ``GFp`` or a bare prime."""
        if isinstance(text, Field):
            return text
        if isinstance(text, int):
            return cls(text)
        t = text.strip().upper()
        if t in ("Q", "QQ", "0"):
            return cls(0)
        m = re.fullmatch(r"(?:GF|F)?\(?(\d+)\)?", t)
        if not m:
            raise ValueError(f"unrecognised field {text!r}")
        return cls(int(m.group(1)))

    # -- conversions ------------------------------------------------------

    def elem(self, x):
        if self.p:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def matrix(self, data, shape: tuple[int, int] | None = None) -> np.ndarray:
        """Convert integer (or rational) data into a matrix over this field."""
        a = np.asarray(data, dtype=object)
        if shape is not None:
            a = a.reshape(shape)
        if a.ndim != 2:
            raise LinAlgError("expected a 2-d matrix")
        if self.p:
            out = np.zeros(a.shape, dtype=np.int64)
            for idx, v in np.ndenumerate(a):
                if v:
                    out[idx] = self.elem(v)
            return out
        out = np.empty(a.shape, dtype=object)
        for idx, v in np.ndenumerate(a):
            out[idx] = Fraction(v)
        return out

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.p:
            return np.zeros((rows, cols), dtype=np.int64)
        return self.matrix(np.zeros((rows, cols), dtype=object))

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = self.elem(1)
        return m

    def to_python(self, M: np.ndarray) -> list[list]:
        """Plain nested lists (ints, or ints/Fraction strings over Q) for JSON output."""
        out = []
        for row in M.tolist():
            if self.p:
                out.append([int(v) for v in row])
            else:
                out.append([int(v) if Fraction(v).denominator == 1 else str(v) for v in row])
        return out

    # -- arithmetic -------------------------------------------------------

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if A.shape[1] != B.shape[0]:
            raise LinAlgError(f"shape mismatch {A.shape} @ {B.shape}")
        if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
            return self.zeros(A.shape[0], B.shape[1])
        if self.p:
            if (self.p - 1) ** 2 * A.shape[1] < 2**62:
                return np.ascontiguousarray((A @ B) % self.p, dtype=np.int64)
            prod = A.astype(object) @ B.astype(object)
            return np.ascontiguousarray(prod % self.p, dtype=np.int64)
        return self.matrix(A.dot(B))

    def sub(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.p:
            return (A - B) % self.p
        return A - B

    def neg(self, A: np.ndarray) -> np.ndarray:
        if self.p:
            return (-A) % self.p
        return -A

    def is_zero(self, A: np.ndarray) -> bool:
        return not np.any(A != 0)

    def equal(self, A: np.ndarray, B: np.ndarray) -> bool:
        return A.shape == B.shape and self.is_zero(self.sub(A, B))

    # -- elimination ------------------------------------------------------

    def rref(self, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form (a new array) and its pivot columns."""
        m, n = M.shape
        if m == 0 or n == 0:
            return M.copy(), []
        if self.p:
            a = np.array(M, dtype=np.int64, order="C", copy=True)
            piv = _kern.rref_modp(a, self.p)
            return a, list(piv)
        rows = [[Fraction(v) for v in r] for r in M.tolist()]
        piv = _rref_q(rows, n)
        out = np.empty((m, n), dtype=object)
        for i, r in enumerate(rows):
            out[i, :] = r
        return out, piv

    def rank(self, M: np.ndarray) -> int:
        m, n = M.shape
        if m == 0 or n == 0:
            return 0
        if self.p:
            a = np.array(M, dtype=np.int64, order="C", copy=True)
            return int(_kern.rank_modp(a, self.p))
        return len(self.rref(M)[1])

    def nullspace(self, M: np.ndarray) -> np.ndarray:
        """Columns spanning ``{v : M v = 0}``, one per free column of the RREF."""
        n = M.shape[1]
        R, piv = self.rref(M)
        free = [c for c in range(n) if c not in set(piv)]
        N = self.zeros(n, len(free))
        one = self.elem(1)
        for k, f in enumerate(free):
            N[f, k] = one
            for i, c in enumerate(piv):
                v = R[i, f]
                if v:
                    N[c, k] = self.elem(-v) if self.p else -v
        return N

    def express(self, N: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Solve ``N X = V`` for ``N`` of full column rank; raise if ``V`` is outside the span."""
        m, k = N.shape
        s = V.shape[1]
        if m == 0:
            return self.zeros(k, s)
        aug = np.concatenate([N, V], axis=1)
        if not self.p:
            aug = aug.astype(object)
        R, piv = self.rref(aug)
        if piv[:k] != list(range(k)):
            raise LinAlgError("columns are not linearly independent")
        if any(c >= k for c in piv):
            raise LinAlgError("vector outside the column span")
        X = R[:k, k:]
        return np.ascontiguousarray(X) if self.p else X


@lru_cache(maxsize=None)
def field(text) -> Field:
    return Field.parse(text)


QQ = Field(0)
GF2 = Field(2)
