from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sposet import _kernels_py, linalg
from sposet.linalg import GF2, QQ, Field, LinAlgError

try:
    from sposet import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

PRIMES = [2, 3, 5, 7, 101, 2147483647]


def matrices(max_side=7, lo=-3, hi=3):
    return st.integers(0, max_side).flatmap(
        lambda m: st.integers(0, max_side).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m).map(
                lambda rows: np.array(rows, dtype=np.int64).reshape(m, n)
            )
        )
    )


def test_field_parse():
    assert Field.parse("Q") == QQ
    assert Field.parse("GF(2)") == GF2
    assert Field.parse("gf3").p == 3
    assert Field.parse(5).name == "GF(5)"
    with pytest.raises(ValueError):
        Field.parse("GF(4)")
    with pytest.raises(ValueError):
        Field.parse("R")


@pytest.mark.skipif(_compiled is None, reason="compiled kernels not built")
@given(matrices(), st.sampled_from(PRIMES))
def test_compiled_matches_python(A, p):
    a1 = np.ascontiguousarray(A % p, dtype=np.int64)
    a2 = a1.copy()
    piv1 = list(_compiled.rref_modp(a1, p))
    piv2 = list(_kernels_py.rref_modp(a2, p))
    assert piv1 == piv2
    assert np.array_equal(a1, a2)
    assert _compiled.rank_modp(A % p, p) == len(piv1)


@given(matrices(), st.sampled_from([QQ, GF2, Field(3), Field(7)]))
def test_rank_nullity(A, F):
    M = F.matrix(A)
    N = F.nullspace(M)
    assert N.shape == (A.shape[1], A.shape[1] - F.rank(M))
    assert F.is_zero(F.matmul(M, N))


@given(matrices(), st.sampled_from([QQ, Field(5)]))
def test_rref_is_reduced(A, F):
    R, piv = F.rref(F.matrix(A))
    for i, c in enumerate(piv):
        col = R[:, c]
        assert col[i] == F.elem(1)
        assert sum(1 for v in col if v) == 1
    for i in range(len(piv), R.shape[0]):
        assert not any(R[i, :])


@given(matrices(max_side=5), st.sampled_from([QQ, Field(7)]))
def test_express_round_trip(A, F):
    M = F.matrix(A)
    R, piv = F.rref(M)
    N = M[:, piv] if piv else F.zeros(M.shape[0], 0)
    X = F.express(N, M)
    assert F.equal(F.matmul(N, X), M)


def test_express_outside_span():
    N = QQ.matrix([[1], [0]])
    with pytest.raises(LinAlgError):
        QQ.express(N, QQ.matrix([[0], [1]]))
    with pytest.raises(LinAlgError):
        QQ.express(QQ.matrix([[1, 2], [2, 4]]), QQ.matrix([[1], [2]]))


def test_rational_entries():
    M = QQ.matrix([[Fraction(1, 2), 1], [1, 2]])
    assert QQ.rank(M) == 1
    assert GF2.elem(Fraction(1, 3)) == 1


def test_large_prime_matmul_is_exact():
    p = 2147483647
    F = Field(p)
    A = F.matrix([[p - 1] * 4])
    B = F.matrix([[p - 1]] * 4)
    assert int(F.matmul(A, B)[0, 0]) == 4 % p


def test_kernel_flag():
    assert linalg.KERNEL in ("compiled", "python")
