"""Cellular cochain complexes of simplicial posets and their cohomology.

A face ``y`` of rank ``i+1`` spans degree ``i``.  The coboundary is

    delta(y) = sum over j not in supp(y) of (-1)**u_j * sum_{z in M(x_j, y)} z

with ``u_j`` the number of ``i`` in ``supp(y)`` lying *after* ``j`` in the
orientation.  Relative complexes ``C(P, Q)`` keep only the faces outside the
order ideal ``Q``; that set is an upper set, so the coboundary restricts.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Hashable, Sequence

import numpy as np

from .linalg import QQ, Field, LinAlgError
from .poset import OrderIdealView, PosetError, SimplicialPoset, bits


class InvalidOrientation(PosetError):
    axiom = "InvalidOrientation"


class NotOrderIdeal(PosetError):
    axiom = "NotOrderIdeal"


class NotNested(PosetError):
    axiom = "NotNested"


class Orientation:
    """A partial order on vertex indices that is total on every face support."""

    def __init__(self, n: int, less: Callable[[int, int], bool], name: str = "custom"):
        self.n = n
        self.less = less
        self.name = name

    @classmethod
    def natural(cls, n: int) -> "Orientation":
        return cls(n, lambda a, b: a < b, "natural")

    @classmethod
    def from_key(cls, key: Sequence[int]) -> "Orientation":
        """Vertices with equal keys are incomparable."""
        key = tuple(key)
        return cls(len(key), lambda a, b: key[a] < key[b], "key")

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "Orientation":
        """Total order listing the vertices from smallest to largest."""
        pos = {v: i for i, v in enumerate(perm)}
        return cls(len(pos), lambda a, b: pos[a] < pos[b], "permutation")

    def exponent(self, j: int, supp: int) -> int:
        """``u_j``: elements of the support mask lying after ``j``."""
        return sum(1 for i in bits(supp) if self.less(j, i))

    def check(self, P: SimplicialPoset) -> None:
        if self.n != P.n_vertices:
            raise InvalidOrientation(f"orientation on {self.n} vertices, poset has {P.n_vertices}")
        for s in P.faces_by_support:
            vs = list(bits(s))
            for a in vs:
                if self.less(a, a):
                    raise InvalidOrientation("orientation is not irreflexive")
                for b in vs:
                    if a < b and self.less(a, b) == self.less(b, a):
                        raise InvalidOrientation(
                            f"vertices {a + 1} and {b + 1} share a face but are not strictly ordered",
                            P.labels[P.faces_by_support[s][0]],
                        )
                    for c in vs:
                        if self.less(a, b) and self.less(b, c) and not self.less(a, c):
                            raise InvalidOrientation("orientation is not transitive on a face")


@dataclass
class CochainComplex:
    """Finite cochain complex with integer differentials.

    ``bases[i]`` labels the basis of degree ``i``; ``d[i]`` maps degree ``i``
    to ``i + 1`` and has shape ``(len(bases[i+1]), len(bases[i]))``.
    """

    bases: dict[int, list[Hashable]]
    d: dict[int, np.ndarray] = dc_field(default_factory=dict)

    @property
    def degrees(self) -> range:
        if not self.bases:
            return range(0)
        return range(min(self.bases), max(self.bases) + 1)

    def dim(self, i: int) -> int:
        return len(self.bases.get(i, ()))

    def differential(self, i: int) -> np.ndarray:
        if i in self.d:
            return self.d[i]
        return np.zeros((self.dim(i + 1), self.dim(i)), dtype=np.int64)

    def index(self, i: int) -> dict[Hashable, int]:
        return {b: k for k, b in enumerate(self.bases.get(i, ()))}

    def is_complex(self, field: Field = QQ) -> bool:
        """``d[i+1] @ d[i] == 0`` in every degree."""
        for i in self.degrees:
            a = field.matrix(self.differential(i))
            b = field.matrix(self.differential(i + 1))
            if not field.is_zero(field.matmul(b, a)):
                return False
        return True

    def dims(self, field: Field = QQ) -> dict[int, int]:
        ranks = {i: field.rank(field.matrix(self.differential(i))) for i in range(self.degrees.start - 1, self.degrees.stop)}
        return {i: self.dim(i) - ranks[i] - ranks[i - 1] for i in self.degrees}

    def cohomology(self, field: Field = QQ) -> "CohomologyResult":
        return CohomologyResult.compute(self, field)


@dataclass
class CohomologyResult:
    """Cohomology dimensions plus deterministic representative cocycles.

    For each degree ``i``, ``reps[i]`` holds representative cocycles as
    columns.  They are the kernel vectors (free-variable basis of the RREF of
    ``d[i]``) that are not in the span of the coboundaries and of earlier
    kernel vectors.
    """

    field: Field
    dims: dict[int, int]
    reps: dict[int, np.ndarray]
    _span: dict[int, tuple[np.ndarray, int]]

    @classmethod
    def compute(cls, complex_: CochainComplex, field: Field) -> "CohomologyResult":
        dims: dict[int, int] = {}
        reps: dict[int, np.ndarray] = {}
        span: dict[int, tuple[np.ndarray, int]] = {}
        for i in complex_.degrees:
            n = complex_.dim(i)
            D = field.matrix(complex_.differential(i))
            Dprev = field.matrix(complex_.differential(i - 1))
            Z = field.nullspace(D)
            M = np.concatenate([Dprev, Z], axis=1)
            if not field.p:
                M = M.astype(object)
            _, piv = field.rref(M) if n else (None, [])
            c = Dprev.shape[1]
            nb = sum(1 for p in piv if p < c)
            H = M[:, [p for p in piv if p >= c]]
            dims[i] = H.shape[1]
            reps[i] = H if n else field.zeros(0, 0)
            span[i] = (M[:, piv] if n else field.zeros(0, 0), nb)
        return cls(field, dims, reps, span)

    def coordinates(self, i: int, V: np.ndarray) -> np.ndarray:
        """Coordinates of the classes of the cocycles ``V`` (columns) in ``reps[i]``."""
        if self.dims.get(i, 0) == 0:
            return self.field.zeros(0, V.shape[1])
        N, nb = self._span[i]
        try:
            X = self.field.express(N, V)
        except LinAlgError as exc:
            raise LinAlgError(f"degree {i}: {exc} (not a cocycle?)") from None
        return X[nb:, :]

    def to_json(self) -> dict:
        return {"dims": {str(i): d for i, d in sorted(self.dims.items())}, "field": self.field.name}


def induced_map(
    source: CohomologyResult,
    target: CohomologyResult,
    chain_map: np.ndarray,
    i: int,
) -> np.ndarray:
    """Matrix of the map on ``H^i`` induced by an integer chain map in degree ``i``."""
    f = source.field
    hs = source.dims.get(i, 0)
    ht = target.dims.get(i, 0)
    if hs == 0 or ht == 0:
        return f.zeros(ht, hs)
    images = f.matmul(f.matrix(chain_map), source.reps[i])
    return target.coordinates(i, images)


# -- complexes of posets --------------------------------------------------


def coboundary(P: SimplicialPoset, orientation: Orientation | None, i: int, exclude: int = 0) -> np.ndarray:
    """Matrix of ``delta: C^i -> C^{i+1}``, omitting faces in the ``exclude`` mask."""
    orientation = orientation or Orientation.natural(P.n_vertices)
    cols = _basis(P, i, exclude)
    rows = _basis(P, i + 1, exclude)
    row_of = {z: k for k, z in enumerate(rows)}
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    full = (1 << P.n_vertices) - 1
    for c, y in enumerate(cols):
        s = P.support[y]
        seen: set[int] = set()
        for j in bits(full & ~s):
            sign = -1 if orientation.exponent(j, s) % 2 else 1
            for z in P.min_upper_bounds(P.vertex_of_index[j], y):
                assert z not in seen, "a face reached through two different vertices"
                seen.add(z)
                if z in row_of:
                    D[row_of[z], c] += sign
    return D


def _basis(P: SimplicialPoset, i: int, exclude: int) -> list[int]:
    r = i + 1
    if r < 0 or r >= len(P.faces_by_rank):
        return []
    return [y for y in P.faces_by_rank[r] if not exclude >> y & 1]


def poset_complex(P: SimplicialPoset, orientation: Orientation | None = None, exclude: int = 0) -> CochainComplex:
    """``C~(P)`` (``exclude == 0``) or ``C(P, Q)`` with ``Q`` given as a member mask."""
    orientation = orientation or Orientation.natural(P.n_vertices)
    orientation.check(P)
    bases = {i: _basis(P, i, exclude) for i in range(-1, P.dim + 1)}
    d = {i: coboundary(P, orientation, i, exclude) for i in range(-1, P.dim)}
    return CochainComplex(bases, d)


def reduced_cohomology(P: SimplicialPoset, field: Field = QQ, orientation: Orientation | None = None) -> CohomologyResult:
    return poset_complex(P, orientation).cohomology(field)


def reduced_dims(P: SimplicialPoset, field: Field = QQ, orientation: Orientation | None = None) -> dict[int, int]:
    """Dimensions only; skips the representative bookkeeping."""
    return poset_complex(P, orientation).dims(field)


def _ideal_mask(P: SimplicialPoset, Q: OrderIdealView | int) -> int:
    if isinstance(Q, OrderIdealView):
        if Q.parent is not P:
            raise NotOrderIdeal("order ideal belongs to a different poset")
        return Q.members
    mask = Q
    for y in bits(mask):
        if P.below[y] & ~mask:
            raise NotOrderIdeal("subset is not closed downward", P.labels[y])
    return mask


def relative_complex(P: SimplicialPoset, Q: OrderIdealView | int, orientation: Orientation | None = None) -> CochainComplex:
    """Faces outside ``Q``.  The empty ideal (the costar of the bottom) gives the augmented complex."""
    return poset_complex(P, orientation, exclude=_ideal_mask(P, Q))


def relative_cohomology(
    P: SimplicialPoset, Q: OrderIdealView | int, field: Field = QQ, orientation: Orientation | None = None
) -> CohomologyResult:
    return relative_complex(P, Q, orientation).cohomology(field)


def induced_map_of_pairs(
    P: SimplicialPoset,
    Q1: OrderIdealView | int,
    Q2: OrderIdealView | int,
    field: Field = QQ,
    i: int = 0,
    orientation: Orientation | None = None,
) -> np.ndarray:
    """``H^i(P, Q2) -> H^i(P, Q1)`` induced by ``(P, Q1) -> (P, Q2)``, for ``Q1`` inside ``Q2``."""
    m1, m2 = _ideal_mask(P, Q1), _ideal_mask(P, Q2)
    if m1 & ~m2:
        raise NotNested("first order ideal is not contained in the second")
    c1 = relative_complex(P, m1, orientation)
    c2 = relative_complex(P, m2, orientation)
    h1 = c1.cohomology(field)
    h2 = c2.cohomology(field)
    return induced_map(h2, h1, inclusion_matrix(c2.bases.get(i, []), c1.bases.get(i, [])), i)


def inclusion_matrix(source: Sequence[Hashable], target: Sequence[Hashable], signs: dict | None = None) -> np.ndarray:
    """0/1 (or signed) matrix sending each source basis label to the same target label."""
    pos = {b: k for k, b in enumerate(target)}
    M = np.zeros((len(target), len(source)), dtype=np.int64)
    for c, b in enumerate(source):
        M[pos[b], c] = signs[b] if signs else 1
    return M


def euler_characteristic(dims: dict[int, int]) -> int:
    return sum((-1) ** i * d for i, d in dims.items())
