"""Cohen-Macaulay and Buchsbaum tests for simplicial posets over a given field.

Both properties are decided through Reisner-type vanishing on the order
complex.  The CM verdict is cross-checked against the same vanishing on
the links of ``P`` itself, and the Buchsbaum verdict against the action of
the vertices on local cohomology below the top degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Iterator

from .cochains import reduced_dims
from .formulas import structure_maps
from .linalg import QQ, Field
from .poset import SimplicialPoset, order_complex


class RouteDisagreement(AssertionError):
    """The order-complex and poset-link CM routes gave different answers."""


@dataclass(frozen=True)
class Witness:
    route: str  # "order_complex", "poset_link" or "purity"
    face: str  # "" for the empty chain
    degree: int
    dim: int

    def to_json(self) -> dict:
        return {"route": self.route, "face": self.face or None, "degree": self.degree, "dim": self.dim}


@dataclass(frozen=True)
class MapWitness:
    alpha: tuple[int, ...]
    j: int
    degree: int
    rank: int

    def to_json(self) -> dict:
        return {"alpha": list(self.alpha), "j": self.j + 1, "degree": self.degree, "rank": self.rank}


@dataclass
class ClassificationReport:
    field: Field
    dim: int
    is_pure: bool
    is_cm: bool
    is_buchsbaum: bool
    witnesses: list[Witness] = dc_field(default_factory=list)
    cm_by_links: bool = True
    m_action_witness: MapWitness | None = None

    @property
    def exit_code(self) -> int:
        return 0 if self.is_cm else 1 if self.is_buchsbaum else 2

    @property
    def consistent(self) -> bool:
        chain = (not self.is_cm or self.is_buchsbaum) and (not self.is_buchsbaum or self.is_pure)
        action = self.m_action_witness is None if self.is_buchsbaum else True
        if not self.is_pure:
            action = action and self.m_action_witness is not None
        return chain and action and self.cm_by_links == self.is_cm

    def to_json(self) -> dict:
        return {
            "field": self.field.name,
            "dim": self.dim,
            "pure": self.is_pure,
            "cm": self.is_cm,
            "buchsbaum": self.is_buchsbaum,
            "witnesses": [w.to_json() for w in self.witnesses],
            "m_action_witness": self.m_action_witness.to_json() if self.m_action_witness else None,
        }


def is_pure(P: SimplicialPoset) -> bool:
    return len({P.rank[y] for y in P.maximal_faces}) <= 1


def _vanishing_failures(Q: SimplicialPoset, field: Field) -> list[tuple[int, int]]:
    """``(i, dim)`` with ``H~^i(Q) != 0`` for some ``i < dim Q``."""
    h = reduced_dims(Q, field)
    return [(i, d) for i, d in sorted(h.items()) if d and i < Q.dim]


def reisner_failures(P: SimplicialPoset, field: Field = QQ) -> list[Witness]:
    """Faces of the order complex (the empty chain included) whose link has low cohomology."""
    delta = _order_complex(P)
    out = []
    for F in range(len(delta)):
        for i, d in _vanishing_failures(delta.link(F), field):
            out.append(Witness("order_complex", "" if F == 0 else delta.labels[F], i, d))
    return out


def link_failures(P: SimplicialPoset, field: Field = QQ) -> list[Witness]:
    """Faces ``y`` of ``P`` (the bottom included) whose link has low cohomology."""
    out = []
    for y in range(len(P)):
        for i, d in _vanishing_failures(P.link(y), field):
            out.append(Witness("poset_link", P.labels[y], i, d))
    return out


@lru_cache(maxsize=256)
def _order_complex(P: SimplicialPoset) -> SimplicialPoset:
    return order_complex(P)


def m_action_witnesses(P: SimplicialPoset, field: Field = QQ, low: int = -2) -> Iterator[MapWitness]:
    """Nonzero maps ``x_j`` on local cohomology below the top degree, over the box ``[low, 0]^n``."""
    top = P.dim + 1
    for alpha in product(range(low, 1), repeat=P.n_vertices):
        for j in range(P.n_vertices):
            for i, M in structure_maps(P, alpha, j, field).items():
                if i < top and M.size and not field.is_zero(M):
                    yield MapWitness(alpha, j, i, field.rank(M))


@lru_cache(maxsize=256)
def classify(P: SimplicialPoset, field: Field = QQ, check_action: bool = True) -> ClassificationReport:
    pure = is_pure(P)
    failures = reisner_failures(P, field)
    cm = not failures
    cm_links = not link_failures(P, field)
    if cm_links != cm:
        raise RouteDisagreement(f"{P.name}: order complex says CM={cm}, links say CM={cm_links}")
    buchsbaum = pure and all(not w.face for w in failures)
    witness = next(m_action_witnesses(P, field), None) if check_action else None
    if not pure:
        top = max(P.rank[y] for y in P.maximal_faces)
        short = [Witness("purity", P.labels[y], P.rank[y] - 1, 1) for y in P.maximal_faces if P.rank[y] < top]
        failures = short + failures
    return ClassificationReport(field, P.dim, pure, cm, buchsbaum, failures, cm_links, witness)


def is_cohen_macaulay(P: SimplicialPoset, field: Field = QQ) -> ClassificationReport:
    return classify(P, field)


def is_buchsbaum(P: SimplicialPoset, field: Field = QQ) -> ClassificationReport:
    return classify(P, field)
