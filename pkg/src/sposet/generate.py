"""Random simplicial posets, for property tests and benchmarks.

Each facet starts as its own simplex.  Faces with the same vertex set in
different facets are then glued at random; a gluing always drags the whole
boundary along, which keeps every lower interval Boolean.  Without gluing
beyond the vertices one gets many parallel cells (digon-like posets); with
full gluing one gets the face poset of a simplicial complex.
"""

from __future__ import annotations

import random
from itertools import combinations

from .poset import BOTTOM_LABEL, SimplicialPoset


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _subsets(s: tuple[int, ...]):
    for r in range(1, len(s) + 1):
        yield from combinations(s, r)


def random_poset(
    rng: random.Random,
    n_vertices: int = 4,
    n_facets: int = 3,
    max_rank: int = 3,
    glue: float = 0.5,
    name: str = "random",
) -> SimplicialPoset:
    """A random simplicial poset on at most ``n_vertices`` vertices.

    ``glue`` is the probability of identifying two copies of a shared face.
    Vertices that end up in no facet are dropped.
    """
    facets = []
    for _ in range(n_facets):
        r = rng.randint(1, min(max_rank, n_vertices))
        facets.append(tuple(sorted(rng.sample(range(n_vertices), r))))
    uf = _UnionFind()
    for i, f in enumerate(facets):
        for s in _subsets(f):
            uf.find((i, s))
    for i, f in enumerate(facets):
        for k in range(i):
            common = tuple(sorted(set(f) & set(facets[k])))
            for s in _subsets(common):
                if len(s) == 1 or rng.random() < glue:
                    for t in _subsets(s):
                        uf.union((i, t), (k, t))
    classes = sorted({uf.find(a) for a in list(uf.parent)}, key=lambda c: (len(c[1]), c[1], c[0]))
    pos = {c: n + 1 for n, c in enumerate(classes)}
    verts = sorted({c[1][0] for c in classes if len(c[1]) == 1})
    labels = [BOTTOM_LABEL]
    covers: list[list[int]] = [[]]
    seen: dict[tuple[int, ...], int] = {}
    for i, s in classes:
        copy = seen[s] = seen.get(s, 0) + 1
        labels.append("x" + "x".join(str(verts.index(v) + 1) for v in s) + (f"_{copy}" if copy > 1 else ""))
        if len(s) == 1:
            covers.append([0])
        else:
            covers.append([pos[uf.find((i, s[:q] + s[q + 1:]))] for q in range(len(s))])
    atoms = [pos[uf.find(next((i, (v,)) for i, f in enumerate(facets) if v in f))] for v in verts]
    return SimplicialPoset(labels, covers, atoms, name=name)
