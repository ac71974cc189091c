"""Reading and writing poset files.

Two JSON shapes are accepted::

    {"name": "...", "n_vertices": 3,
     "faces": [{"id": "x1", "covers": [], "vertex": 1}, {"id": "e12", "covers": ["x1", "x2"]}, ...]}

    {"name": "...", "facets": [[1, 2, 3], [3, 4]]}

In the first form the bottom element is implicit: faces with an empty
``covers`` list are the atoms and must carry a 1-based ``"vertex"`` number.
An explicit ``"bottom": "<id>"`` may be given instead, in which case atoms
list the bottom in their covers.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .poset import BOTTOM_LABEL, FormatError, NoBottom, SimplicialPoset, from_simplices


def validate(raw: dict[str, Any]) -> SimplicialPoset:
    """Turn a raw description into a validated :class:`SimplicialPoset`.

    Raises a :class:`~sposet.poset.PosetError` subclass naming the first
    violated axiom and the witnessing face.
    """
    if not isinstance(raw, dict):
        raise FormatError("poset description must be a JSON object")
    name = str(raw.get("name", ""))
    if "facets" in raw:
        facets = raw["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise FormatError("'facets' must be a list of integer lists")
        return from_simplices(facets, name=name)
    faces = raw.get("faces")
    if not isinstance(faces, list):
        raise FormatError("expected a 'faces' list or a 'facets' list")

    explicit_bottom = raw.get("bottom")
    ids: list[str] = []
    for f in faces:
        if not isinstance(f, dict) or "id" not in f:
            raise FormatError("every face needs an 'id'")
        ids.append(str(f["id"]))
    if explicit_bottom is None:
        if BOTTOM_LABEL in ids:
            raise FormatError(f"face id {BOTTOM_LABEL!r} is reserved for the implicit bottom", BOTTOM_LABEL)
        labels = [BOTTOM_LABEL] + ids
        entries = [None] + faces
    else:
        bottom = str(explicit_bottom)
        if bottom not in ids:
            raise NoBottom(f"declared bottom {bottom!r} is not among the faces", bottom)
        k = ids.index(bottom)
        labels = [bottom] + ids[:k] + ids[k + 1:]
        entries = [faces[k]] + faces[:k] + faces[k + 1:]
        if entries[0].get("covers"):
            raise NoBottom(f"declared bottom {bottom!r} covers other faces", bottom)

    pos: dict[str, int] = {}
    for i, lab in enumerate(labels):
        if lab in pos:
            raise FormatError(f"duplicate face id {lab!r}", lab)
        pos[lab] = i

    covers: list[list[int]] = [[]]
    vertex_of: dict[int, int] = {}
    for i in range(1, len(labels)):
        f = entries[i]
        cov = f.get("covers", [])
        if not isinstance(cov, list):
            raise FormatError(f"covers of {labels[i]!r} must be a list", labels[i])
        idx = []
        for c in cov:
            if str(c) not in pos:
                raise FormatError(f"{labels[i]!r} covers unknown face {c!r}", labels[i])
            idx.append(pos[str(c)])
        if explicit_bottom is None and not idx:
            idx = [0]
        covers.append(idx)
        if idx == [0]:
            v = f.get("vertex")
            if not isinstance(v, int) or isinstance(v, bool):
                raise FormatError(f"atom {labels[i]!r} must declare an integer 'vertex'", labels[i])
            if v in vertex_of:
                raise FormatError(f"vertex {v} assigned twice", labels[i])
            vertex_of[v] = i
    n = len(vertex_of)
    if sorted(vertex_of) != list(range(1, n + 1)):
        raise FormatError(f"atom vertex numbers must be exactly 1..{n}")
    if "n_vertices" in raw and raw["n_vertices"] != n:
        raise FormatError(f"n_vertices is {raw['n_vertices']} but {n} atoms were given")
    return SimplicialPoset(labels, covers, [vertex_of[v] for v in range(1, n + 1)], name=name)


def to_json(P: SimplicialPoset) -> dict[str, Any]:
    """Emit ``P`` in the faces form; ``validate(to_json(P))`` reproduces the FaceId order."""
    vertex = {a: i + 1 for i, a in enumerate(P.vertex_of_index)}
    faces = []
    for y in range(1, len(P)):
        entry: dict[str, Any] = {"id": P.labels[y], "covers": [P.labels[c] for c in P.covers[y] if c != 0]}
        if y in vertex:
            entry["vertex"] = vertex[y]
        faces.append(entry)
    out: dict[str, Any] = {"name": P.name, "n_vertices": P.n_vertices, "faces": faces}
    if P.labels[0] != BOTTOM_LABEL:
        out["bottom"] = P.labels[0]
        out["faces"] = [{"id": P.labels[0], "covers": []}] + [
            dict(f, covers=f["covers"] or [P.labels[0]]) for f in faces
        ]
    return out


def load(path: str | Path) -> SimplicialPoset:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    P = validate(raw)
    if not P.name:
        P.name = path.stem
    return P


def dump(P: SimplicialPoset, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json(P), indent=1) + "\n", encoding="utf-8")
