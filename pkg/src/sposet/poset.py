"""Simplicial posets: validation, supports, links, costars, products, order complexes.

Elements are addressed by integer ``FaceId`` values.  Index 0 is always the
bottom element; the remaining indices follow the order in which faces were
supplied, so every basis built on top of a poset is reproducible.

Vertex indices are 0-based inside the library (``0 .. n-1``).  Supports and
lower/upper sets are stored as Python ``int`` bitmasks.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

BOTTOM_LABEL = "0^"

FaceId = int


class PosetError(ValueError):
    """A raw poset violates one of the simplicial-poset axioms.

    ``axiom`` names the violated condition, ``witness`` the offending face
    label (or pair of labels).
    """

    axiom = "PosetError"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness

    def to_json(self) -> dict:
        return {"error": self.axiom, "message": str(self), "witness": self.witness}


class NoBottom(PosetError):
    axiom = "NoBottom"


class NonBoolean(PosetError):
    axiom = "NonBoolean"


class RankGap(PosetError):
    axiom = "RankGap"


class FormatError(PosetError):
    axiom = "FormatError"


class BadSubset(PosetError):
    axiom = "BadSubset"


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class SimplicialPoset:
    """An immutable, validated simplicial poset.

    Build one with :func:`validate` (from a raw description) or through the
    constructions in this module.  The constructor itself checks every axiom,
    so any instance in existence is valid.
    """

    def __init__(
        self,
        labels: Sequence[str],
        covers: Sequence[Iterable[int]],
        vertex_atoms: Sequence[int],
        name: str = "",
    ):
        self.name = name
        self.labels: tuple[str, ...] = tuple(labels)
        self.covers: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(set(c))) for c in covers)
        size = len(self.labels)
        if size == 0:
            raise NoBottom("the empty poset is not a simplicial poset")
        if len(self.covers) != size:
            raise FormatError("labels and covers differ in length")
        if len(set(self.labels)) != size:
            seen: set[str] = set()
            for lab in self.labels:
                if lab in seen:
                    raise FormatError(f"duplicate face id {lab!r}", lab)
                seen.add(lab)
        if self.covers[0]:
            raise NoBottom("the bottom element must not cover anything", self.labels[0])
        for y in range(1, size):
            if not self.covers[y]:
                raise NoBottom(
                    f"face {self.labels[y]!r} covers nothing but is not the bottom",
                    self.labels[y],
                )
            for c in self.covers[y]:
                if not 0 <= c < size or c == y:
                    raise FormatError(f"bad cover index {c} for {self.labels[y]!r}", self.labels[y])

        order = self._topological_order()
        rank = [0] * size
        for y in order[1:]:
            cs = self.covers[y]
            rank[y] = rank[cs[0]] + 1
            for c in cs[1:]:
                if rank[c] != rank[cs[0]]:
                    lo, hi = (c, cs[0]) if rank[c] < rank[cs[0]] else (cs[0], c)
                    raise RankGap(
                        f"{self.labels[y]!r} covers faces of different ranks "
                        f"({self.labels[lo]!r}, {self.labels[hi]!r})",
                        [self.labels[lo], self.labels[y]],
                    )
        self.rank: tuple[int, ...] = tuple(rank)

        atoms = [y for y in range(size) if rank[y] == 1]
        if sorted(vertex_atoms) != atoms:
            raise FormatError("vertex assignment is not a bijection onto the atoms")
        self.vertex_of_index: tuple[int, ...] = tuple(vertex_atoms)
        self.n_vertices = len(vertex_atoms)
        index_of_atom = {a: i for i, a in enumerate(vertex_atoms)}

        below = [0] * size
        support = [0] * size
        below[0] = 1
        for y in order[1:]:
            b = 1 << y
            s = 0
            for c in self.covers[y]:
                b |= below[c]
                s |= support[c]
            if y in index_of_atom:
                s = 1 << index_of_atom[y]
            below[y] = b
            support[y] = s
        self.below: tuple[int, ...] = tuple(below)
        self.support: tuple[int, ...] = tuple(support)

        above = [0] * size
        for y in range(size):
            for z in bits(below[y]):
                above[z] |= 1 << y
        self.above: tuple[int, ...] = tuple(above)

        # Boolean-interval axiom, checked bottom-up so each lower interval is
        # already known to be Boolean when its cover relations are trusted.
        restrict_tables: list[dict[int, int]] = [dict() for _ in range(size)]
        for y in sorted(range(size), key=lambda v: rank[v]):
            r = rank[y]
            if support[y].bit_count() != r:
                raise NonBoolean(
                    f"rank of {self.labels[y]!r} is {r} but its support has "
                    f"{support[y].bit_count()} vertices",
                    self.labels[y],
                )
            members = list(bits(below[y]))
            if len(members) != 1 << r:
                raise NonBoolean(
                    f"interval below {self.labels[y]!r} has {len(members)} elements, "
                    f"expected {1 << r}",
                    self.labels[y],
                )
            table: dict[int, int] = {}
            for z in members:
                if support[z] in table:
                    raise NonBoolean(
                        f"two faces below {self.labels[y]!r} share support "
                        f"({self.labels[table[support[z]]]!r}, {self.labels[z]!r})",
                        self.labels[y],
                    )
                table[support[z]] = z
            restrict_tables[y] = table
        self._restrict = restrict_tables
        self._mub_cache: dict[tuple[int, int], tuple[int, ...]] = {}
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def _topological_order(self) -> list[int]:
        size = len(self.labels)
        state = [0] * size
        order: list[int] = []
        for start in range(size):
            if state[start]:
                continue
            stack = [(start, 0)]
            state[start] = 1
            while stack:
                y, k = stack.pop()
                cs = self.covers[y]
                if k < len(cs):
                    stack.append((y, k + 1))
                    c = cs[k]
                    if state[c] == 1:
                        raise FormatError(f"cover relation has a cycle through {self.labels[c]!r}", self.labels[c])
                    if state[c] == 0:
                        state[c] = 1
                        stack.append((c, 0))
                else:
                    state[y] = 2
                    order.append(y)
        return order

    # -- basic queries -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"<SimplicialPoset {self.name!r}: {len(self)} faces, n={self.n_vertices}, dim={self.dim}>"

    @property
    def bottom(self) -> FaceId:
        return 0

    @cached_property
    def dim(self) -> int:
        return max(self.rank) - 1

    def face(self, label: str) -> FaceId:
        """Return the FaceId carrying ``label``."""
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no face labelled {label!r} in {self.name or 'poset'}") from None

    def leq(self, w: FaceId, y: FaceId) -> bool:
        return bool(self.below[y] >> w & 1)

    def comparable(self, w: FaceId, y: FaceId) -> bool:
        return bool(self.below[y] >> w & 1 or self.below[w] >> y & 1)

    def support_set(self, y: FaceId) -> frozenset[int]:
        return frozenset(bits(self.support[y]))

    @cached_property
    def faces_by_rank(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.dim + 2)]
        for y, r in enumerate(self.rank):
            out[r].append(y)
        return tuple(tuple(f) for f in out)

    @cached_property
    def faces_by_support(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for y, s in enumerate(self.support):
            out.setdefault(s, []).append(y)
        return {s: tuple(f) for s, f in out.items()}

    def faces_with_support(self, mask: int) -> tuple[int, ...]:
        return self.faces_by_support.get(mask, ())

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        """Number of faces of each rank, starting with the bottom."""
        return tuple(len(f) for f in self.faces_by_rank)

    @cached_property
    def maximal_faces(self) -> tuple[int, ...]:
        return tuple(y for y in range(len(self)) if self.above[y] == 1 << y)

    def restrict_face(self, y: FaceId, subset: int | Iterable[int]) -> FaceId:
        """The unique face ``y_B`` below ``y`` whose support is ``subset``."""
        mask = subset if isinstance(subset, int) else mask_of(subset)
        try:
            return self._restrict[y][mask]
        except KeyError:
            raise BadSubset(
                f"{sorted(bits(mask))} is not a subset of supp({self.labels[y]!r})",
                self.labels[y],
            ) from None

    def min_upper_bounds(self, w: FaceId, y: FaceId) -> tuple[int, ...]:
        """``M(w, y)``: the minimal common upper bounds, in FaceId order."""
        key = (w, y) if w <= y else (y, w)
        hit = self._mub_cache.get(key)
        if hit is None:
            common = self.above[w] & self.above[y]
            hit = tuple(z for z in bits(common) if self.below[z] & common == 1 << z)
            self._mub_cache[key] = hit
        return hit

    def meet(self, w: FaceId, y: FaceId) -> FaceId | None:
        """Greatest common lower bound, or None when it does not exist."""
        common = self.below[w] & self.below[y]
        tops = [z for z in bits(common) if self.above[z] & common == 1 << z]
        return tops[0] if len(tops) == 1 else None

    def chains(self, include_empty: bool = True) -> list[tuple[int, ...]]:
        """All chains of the proper part ``P \\ {0^}``, ordered by length then lexicographically."""
        out: list[tuple[int, ...]] = [()] if include_empty else []

        def extend(chain: tuple[int, ...]):
            top = chain[-1]
            for z in bits(self.above[top] & ~(1 << top)):
                c = chain + (z,)
                out.append(c)
                extend(c)

        for v in range(1, len(self)):
            out.append((v,))
            extend((v,))
        out.sort(key=lambda c: (len(c), c))
        return out

    # -- sub-posets -------------------------------------------------------

    def _induced(self, members: Sequence[int], vertex_atoms: Sequence[int], name: str) -> tuple[list[str], list[list[int]], list[int]]:
        pos = {y: i for i, y in enumerate(members)}
        labels = [self.labels[y] for y in members]
        covers = [[pos[c] for c in self.covers[y] if c in pos] for y in members]
        return labels, covers, [pos[a] for a in vertex_atoms]

    def link(self, y: FaceId) -> "LinkView":
        return LinkView(self, y)

    def costar(self, y: FaceId) -> "OrderIdealView":
        members = (1 << len(self)) - 1 & ~self.above[y]
        return OrderIdealView(self, members, name=f"cost({self.labels[y]})")

    def restrict_to_vertices(self, vertices: int | Iterable[int]) -> "OrderIdealView":
        """``P_W``: faces whose support lies inside ``W``."""
        w = vertices if isinstance(vertices, int) else mask_of(vertices)
        members = mask_of(y for y, s in enumerate(self.support) if s & ~w == 0)
        return OrderIdealView(self, members, name=f"{self.name}_W")

    def interval_below(self, y: FaceId) -> "OrderIdealView":
        return OrderIdealView(self, self.below[y], name=f"[0^,{self.labels[y]}]")

    def order_ideal(self, faces: Iterable[int]) -> "OrderIdealView":
        """Smallest order ideal containing ``faces`` (always contains the bottom)."""
        m = 1
        for y in faces:
            m |= self.below[y]
        return OrderIdealView(self, m)


class LinkView(SimplicialPoset):
    """``lk_P(y)`` as a simplicial poset rooted at ``y``.

    ``to_parent[i]`` is the parent FaceId of element ``i``.  Link vertices are
    ordered by ``(j, k)`` where ``j`` is the parent vertex added to ``supp(y)``
    and ``k`` numbers the elements of ``M(x_j, y)`` in FaceId order.
    """

    def __init__(self, parent: SimplicialPoset, root: FaceId):
        self.parent = parent
        self.root = root
        members = list(bits(parent.above[root]))
        members.remove(root)
        members.insert(0, root)
        ysupp = parent.support[root]
        atoms = [a for a in members if parent.rank[a] == parent.rank[root] + 1]
        groups: dict[int, list[int]] = {}
        for a in atoms:
            (j,) = bits(parent.support[a] & ~ysupp)
            groups.setdefault(j, []).append(a)
        ordered: list[int] = []
        atom_labels: list[tuple[int, int]] = []
        for j in sorted(groups):
            for k, a in enumerate(groups[j]):
                ordered.append(a)
                atom_labels.append((j, k))
        labels, covers, vertex_atoms = parent._induced(members, ordered, "")
        covers[0] = []
        super().__init__(labels, covers, vertex_atoms, name=f"lk({parent.labels[root]})")
        self.to_parent: tuple[int, ...] = tuple(members)
        self.atom_labels: tuple[tuple[int, int], ...] = tuple(atom_labels)

    def from_parent(self, y: FaceId) -> FaceId:
        return self.to_parent.index(y)

    def restrict_parent_vertices(self, parent_vertices: int) -> "OrderIdealView":
        """Restrict to faces whose parent support avoids everything outside ``parent_vertices``."""
        w = mask_of(v for v, (j, _) in enumerate(self.atom_labels) if parent_vertices >> j & 1)
        return self.restrict_to_vertices(w)


class OrderIdealView:
    """A down-closed subset of a simplicial poset (costars, ``P_W``, intervals)."""

    def __init__(self, parent: SimplicialPoset, members: int, name: str = ""):
        self.parent = parent
        self.members = members
        self.name = name
        for y in bits(members):
            if parent.below[y] & ~members:
                raise PosetError(f"{name or 'subset'} is not an order ideal", parent.labels[y])

    def __contains__(self, y: FaceId) -> bool:
        return bool(self.members >> y & 1)

    def __iter__(self) -> Iterator[int]:
        return bits(self.members)

    def __len__(self) -> int:
        return self.members.bit_count()

    def __repr__(self) -> str:
        return f"<OrderIdealView {self.name!r} of {len(self)} faces>"

    def labels(self) -> list[str]:
        return [self.parent.labels[y] for y in self]

    def as_poset(self) -> "SubPoset":
        return SubPoset(self)


class SubPoset(SimplicialPoset):
    """An order ideal re-indexed as a standalone simplicial poset."""

    def __init__(self, ideal: OrderIdealView):
        parent = ideal.parent
        members = list(ideal)
        atoms = [a for a in parent.vertex_of_index if ideal.members >> a & 1]
        labels, covers, vertex_atoms = parent._induced(members, atoms, "")
        super().__init__(labels, covers, vertex_atoms, name=ideal.name)
        self.parent = parent
        self.to_parent: tuple[int, ...] = tuple(members)
        self.parent_vertex: tuple[int, ...] = tuple(parent.vertex_of_index.index(a) for a in atoms)


class ProductPoset(SimplicialPoset):
    """``P x Q`` with the componentwise order; element ``(a, b)`` has index ``a*|Q| + b``."""

    def __init__(self, left: SimplicialPoset, right: SimplicialPoset):
        self.left = left
        self.right = right
        nq = len(right)
        labels = []
        covers = []
        for a in range(len(left)):
            for b in range(nq):
                if a == 0 and b == 0:
                    labels.append(BOTTOM_LABEL)
                else:
                    labels.append(f"({left.labels[a]},{right.labels[b]})")
                covers.append([c * nq + b for c in left.covers[a]] + [a * nq + d for d in right.covers[b]])
        vertex_atoms = [a * nq for a in left.vertex_of_index] + list(right.vertex_of_index)
        super().__init__(labels, covers, vertex_atoms, name=f"{left.name}x{right.name}")

    def pair(self, a: FaceId, b: FaceId) -> FaceId:
        return a * len(self.right) + b

    def unpair(self, y: FaceId) -> tuple[int, int]:
        return divmod(y, len(self.right))


def link(P: SimplicialPoset, y: FaceId) -> LinkView:
    return P.link(y)


def costar(P: SimplicialPoset, y: FaceId) -> OrderIdealView:
    return P.costar(y)


def restrict_to_vertices(P: SimplicialPoset, vertices) -> OrderIdealView:
    return P.restrict_to_vertices(vertices)


def restrict_face(P: SimplicialPoset, y: FaceId, subset) -> FaceId:
    return P.restrict_face(y, subset)


def min_upper_bounds(P: SimplicialPoset, w: FaceId, y: FaceId) -> tuple[int, ...]:
    return P.min_upper_bounds(w, y)


def product(P: SimplicialPoset, Q: SimplicialPoset) -> ProductPoset:
    return ProductPoset(P, Q)


def from_simplices(facets: Iterable[Iterable[int]], name: str = "", vertices: Iterable[int] | None = None) -> SimplicialPoset:
    """Face poset of the simplicial complex generated by ``facets``.

    Vertex labels are renumbered in sorted order; faces are labelled by their
    vertices, e.g. ``x1x2`` for the edge on vertices 1 and 2.
    """
    faces: set[tuple] = {()}
    for facet in facets:
        f = tuple(sorted(set(facet)))
        for r in range(1, len(f) + 1):
            faces.update(combinations(f, r))
    verts = sorted({v for f in faces for v in f} | set(vertices or ()))
    for v in verts:
        faces.add((v,))
    ordered = sorted(faces, key=lambda f: (len(f), [verts.index(v) for v in f]))
    pos = {f: i for i, f in enumerate(ordered)}
    labels = [BOTTOM_LABEL] + ["".join(f"x{v}" for v in f) for f in ordered[1:]]
    covers = [[] if len(f) == 0 else [pos[f[:i] + f[i + 1:]] for i in range(len(f))] for f in ordered]
    return SimplicialPoset(labels, covers, [pos[(v,)] for v in verts], name=name)


def order_complex(P: SimplicialPoset) -> SimplicialPoset:
    """Face poset of ``Delta(P \\ {0^})``; its vertex ``i`` is the element ``i+1`` of ``P``."""
    chains = P.chains()
    pos = {c: i for i, c in enumerate(chains)}
    labels = [BOTTOM_LABEL] + ["<".join(P.labels[y] for y in c) for c in chains[1:]]
    covers = [[pos[c[:i] + c[i + 1:]] for i in range(len(c))] for c in chains]
    return SimplicialPoset(labels, covers, [pos[(v,)] for v in range(1, len(P))], name=f"Delta({P.name})")
