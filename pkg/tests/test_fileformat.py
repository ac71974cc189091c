import json

import pytest
from hypothesis import given

from sposet import corpus
from sposet.fileformat import dump, load, to_json, validate
from sposet.poset import FormatError

from conftest import posets


def test_corpus_loads(fixture_poset):
    assert fixture_poset.n_vertices >= 1 and fixture_poset.name
    assert to_json(fixture_poset)["n_vertices"] == fixture_poset.n_vertices


@given(posets())
def test_round_trip(P):
    Q = validate(json.loads(json.dumps(to_json(P))))
    assert Q.labels == P.labels
    assert Q.covers == P.covers
    assert Q.vertex_of_index == P.vertex_of_index


def test_round_trip_with_explicit_bottom():
    lk = corpus.get("cone").link(corpus.get("cone").face("x1"))
    raw = to_json(lk)
    assert raw["bottom"] == "x1"
    Q = validate(raw)
    assert Q.labels == lk.labels and Q.covers == lk.covers


def test_dump_and_load(tmp_path):
    P = corpus.get("cone")
    path = tmp_path / "c.json"
    dump(P, path)
    assert load(path).labels == P.labels


@pytest.mark.parametrize(
    "raw",
    [
        [],
        {"faces": "nope"},
        {"faces": [{"covers": []}]},
        {"faces": [{"id": "a", "covers": []}]},
        {"faces": [{"id": "a", "covers": [], "vertex": 2}]},
        {"faces": [{"id": "0^", "covers": [], "vertex": 1}]},
        {"faces": [{"id": "a", "covers": ["zz"], "vertex": 1}]},
        {"n_vertices": 2, "faces": [{"id": "a", "covers": [], "vertex": 1}]},
    ],
)
def test_malformed(raw):
    with pytest.raises(FormatError):
        validate(raw)


def test_bad_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{")
    with pytest.raises(FormatError):
        load(path)
