import pytest
from hypothesis import given

from sposet import corpus
from sposet.fileformat import load, validate
from sposet.poset import (
    BadSubset,
    NoBottom,
    NonBoolean,
    PosetError,
    ProductPoset,
    RankGap,
    bits,
    from_simplices,
    order_complex,
)

from conftest import posets


def test_cone_min_upper_bounds():
    P = corpus.get("cone")
    x2, x3 = P.face("x2"), P.face("x3")
    assert {P.labels[z] for z in P.min_upper_bounds(x2, x3)} == {"e23a", "e23b"}
    assert P.min_upper_bounds(P.face("T1"), P.face("e23b")) == ()
    assert P.meet(P.face("e23a"), P.face("e23b")) is None
    assert P.labels[P.restrict_face(P.face("T1"), [1, 2])] == "e23a"
    assert P.labels[P.restrict_face(P.face("T2"), [1, 2])] == "e23b"


def test_restrict_face_needs_subset():
    P = corpus.get("cone")
    with pytest.raises(BadSubset):
        P.restrict_face(P.face("e12"), [2])


def test_cone_link_and_costar():
    P = corpus.get("cone")
    x1 = P.face("x1")
    assert sorted(P.costar(x1).labels()) == sorted(["0^", "x2", "x3", "e23a", "e23b"])
    lk = P.link(x1)
    assert lk.n_vertices == 2 and lk.atom_labels == ((1, 0), (2, 0))
    assert lk.f_vector == (1, 2, 2)


def test_restrict_to_vertices():
    P = corpus.get("cone")
    W = P.restrict_to_vertices([1, 2])
    assert sorted(W.labels()) == sorted(["0^", "x2", "x3", "e23a", "e23b"])


def test_order_complex_of_cone():
    D = order_complex(corpus.get("cone"))
    assert D.f_vector[1] == 9
    assert D.f_vector[-1] == 12


def test_from_simplices_labels():
    P = from_simplices([[1, 2], [2, 3]])
    assert P.labels == ("0^", "x1", "x2", "x3", "x1x2", "x2x3")
    assert P.maximal_faces == (P.face("x1x2"), P.face("x2x3"))


def test_non_boolean_fixture():
    with pytest.raises(NonBoolean) as err:
        load(corpus.FIXTURE_DIR / "invalid" / "non_boolean.json")
    assert err.value.witness == "y"


def test_rank_gap():
    raw = {"faces": [
        {"id": "a", "covers": [], "vertex": 1},
        {"id": "b", "covers": [], "vertex": 2},
        {"id": "ab", "covers": ["a", "b"]},
        {"id": "bad", "covers": ["ab", "a"]},
    ]}
    with pytest.raises(RankGap):
        validate(raw)


def test_two_bottoms():
    raw = {"bottom": "o", "faces": [
        {"id": "o", "covers": []},
        {"id": "p", "covers": []},
        {"id": "a", "covers": ["o"], "vertex": 1},
    ]}
    with pytest.raises(NoBottom):
        validate(raw)


def test_duplicate_edge_in_interval():
    # an edge whose two "vertices" are the same atom twice
    raw = {"faces": [
        {"id": "a", "covers": [], "vertex": 1},
        {"id": "e", "covers": ["a", "a"]},
    ]}
    with pytest.raises(PosetError):
        validate(raw)


@given(posets())
def test_lower_intervals_are_boolean(P):
    for y in range(len(P)):
        assert len(list(bits(P.below[y]))) == 2 ** P.rank[y]
        assert P.restrict_face(y, P.support[y]) == y
        assert P.restrict_face(y, 0) == 0


@given(posets())
def test_min_upper_bounds_symmetric_and_minimal(P):
    for w in range(len(P)):
        for y in range(w, len(P)):
            zs = P.min_upper_bounds(w, y)
            assert set(zs) == set(P.min_upper_bounds(y, w))
            for z in zs:
                assert P.leq(w, z) and P.leq(y, z)
                assert P.support[z] == P.support[w] | P.support[y]


@given(posets(max_vertices=3), posets(max_vertices=2))
def test_product_rank_generating_function(P, Q):
    R = ProductPoset(P, Q)
    fp, fq = P.f_vector, Q.f_vector
    expect = [0] * (len(fp) + len(fq) - 1)
    for a, x in enumerate(fp):
        for b, y in enumerate(fq):
            expect[a + b] += x * y
    assert list(R.f_vector) == expect
    assert R.n_vertices == P.n_vertices + Q.n_vertices


@given(posets())
def test_link_is_upper_set(P):
    for y in range(len(P)):
        lk = P.link(y)
        assert len(lk) == P.above[y].bit_count()
        for k in range(len(lk)):
            assert lk.rank[k] == P.rank[lk.to_parent[k]] - P.rank[y]


@given(posets())
def test_costar_is_complement_of_link(P):
    for y in range(1, len(P)):
        assert len(P.costar(y)) + len(P.link(y)) == len(P)
