from hypothesis import given, strategies as st

from sposet import corpus
from sposet.classify import classify, is_buchsbaum, is_cohen_macaulay, is_pure, link_failures, reisner_failures
from sposet.cochains import reduced_dims
from sposet.formulas import structure_maps
from sposet.linalg import GF2, QQ
from sposet.poset import from_simplices, order_complex

from conftest import FIELDS, posets


def test_purity_examples():
    assert is_pure(corpus.get("cone"))
    assert not is_pure(corpus.get("edge_vertex"))
    assert is_pure(from_simplices([]))


def test_cone_and_spheres(field):
    for name in ("cone", "digon", "simplex_boundary_2", "simplex_boundary_3", "sphere2"):
        r = classify(corpus.get(name), field)
        assert (r.is_pure, r.is_cm, r.is_buchsbaum) == (True, True, True), name
        assert r.exit_code == 0


def test_two_edges_fail_at_empty_face():
    r = is_cohen_macaulay(corpus.get("two_edges"), QQ)
    assert not r.is_cm and r.is_buchsbaum
    assert [w.to_json() for w in r.witnesses] == [{"route": "order_complex", "face": None, "degree": 0, "dim": 1}]
    assert r.exit_code == 1


def test_bowtie_shared_vertex(field):
    P = corpus.get("bowtie")
    r = is_buchsbaum(P, field)
    assert r.is_pure and not r.is_cm and not r.is_buchsbaum
    assert [w.face for w in r.witnesses] == ["x3"]
    assert r.exit_code == 2


def test_edge_vertex_action_witness(field):
    P = corpus.get("edge_vertex")
    r = classify(P, field)
    assert not r.is_pure and not r.is_buchsbaum
    w = r.m_action_witness
    assert w is not None and w.degree < P.dim + 1 == 2 and w.rank > 0
    M = structure_maps(P, w.alpha, w.j, field)[w.degree]
    assert not field.is_zero(M)


def test_witnesses_reverify(fixture_poset, field):
    P = fixture_poset
    delta = order_complex(P)
    for w in classify(P, field).witnesses:
        if w.route != "order_complex":
            continue
        F = delta.face(w.face) if w.face else 0
        assert reduced_dims(delta.link(F), field)[w.degree] == w.dim


def test_corpus_consistency(fixture_poset, field):
    r = classify(fixture_poset, field)
    assert r.consistent
    assert r.cm_by_links == r.is_cm


@given(posets(max_vertices=4), st.sampled_from(FIELDS))
def test_random_consistency(P, F):
    r = classify(P, F)
    assert not r.is_cm or r.is_buchsbaum
    assert not r.is_buchsbaum or r.is_pure
    assert (not reisner_failures(P, F)) == (not link_failures(P, F))
    if r.is_buchsbaum:
        assert r.m_action_witness is None
    if not r.is_pure:
        assert r.m_action_witness is not None


def test_field_is_reported():
    assert classify(corpus.get("cone"), GF2).to_json()["field"] == "GF(2)"


def test_field_sensitivity():
    P = corpus.get("rp2")
    over_q, over_2 = classify(P, QQ), classify(P, GF2)
    assert over_q.is_cm and not over_2.is_cm
    assert over_2.is_buchsbaum
