"""Closed-form Ext and local cohomology computed only from poset cohomology.

Nothing here touches the face ring: every answer is a sum of reduced or
relative cohomology dimensions of links, costars, intervals and products,
so it can be checked independently against :mod:`sposet.koszul`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .cochains import CohomologyResult, induced_map_of_pairs, reduced_dims, relative_complex
from .koszul import MultiDegree, summand_poset
from .linalg import QQ, Field
from .poset import FaceId, SimplicialPoset, bits, mask_of


@dataclass
class ExtFormulaResult:
    alpha: tuple[int, ...]
    ell: int
    dims: dict[int, int]
    summands: list[tuple[FaceId, dict[int, int]]] = dc_field(default_factory=list)
    reason: str = ""

    def to_json(self, P: SimplicialPoset) -> dict:
        return {
            "alpha": list(self.alpha),
            "ell": self.ell,
            "ext": {str(i): d for i, d in sorted(self.dims.items())},
            "summands": [{"face": P.labels[z], "dims": {str(i): d for i, d in sorted(ds.items())}} for z, ds in self.summands],
        }


@dataclass
class LocalCohResult:
    alpha: tuple[int, ...]
    dims: dict[int, int]
    summands: list[tuple[FaceId, dict[int, int]]] = dc_field(default_factory=list)
    costar_dims: dict[int, int] = dc_field(default_factory=dict)

    def to_json(self, P: SimplicialPoset) -> dict:
        return {
            "alpha": list(self.alpha),
            "local_cohomology": {str(i): d for i, d in sorted(self.dims.items())},
            "summands": [{"face": P.labels[w], "dims": {str(i): d for i, d in sorted(ds.items())}} for w, ds in self.summands],
        }


def _zero(n: int) -> dict[int, int]:
    return {i: 0 for i in range(n + 1)}


def ext_formula(
    P: SimplicialPoset, ell: int, alpha: Sequence[int], field: Field = QQ, early_out: bool = True
) -> ExtFormulaResult:
    """Ext dims as a sum over ``supp(z) = B | D`` of shifted product-poset cohomology.

    With ``early_out=False`` the ``D != {}`` case is computed through the
    products with ``[0^, z_D]`` instead of being answered as zero.
    """
    alpha = tuple(alpha)
    n = P.n_vertices
    if len(alpha) != n:
        raise ValueError(f"alpha has length {len(alpha)}, expected {n}")
    deg = MultiDegree(alpha, ell)
    if not deg.in_range:
        return ExtFormulaResult(alpha, ell, _zero(n), reason="some alpha_i < -ell")
    if deg.D and early_out:
        return ExtFormulaResult(alpha, ell, _zero(n), reason="positive entries")
    shift = deg.negative_support.bit_count()
    assert shift == deg.B.bit_count() + deg.C.bit_count()
    total = _zero(n)
    summands = []
    for z in P.faces_with_support(deg.B | deg.D):
        h = _product_dims(P, z, deg.C, deg.D, field)
        ds = {i: h.get(i - shift - 1, 0) for i in range(n + 1)}
        summands.append((z, ds))
        for i, d in ds.items():
            total[i] += d
    return ExtFormulaResult(alpha, ell, total, summands)


@lru_cache(maxsize=65536)
def _product_dims(P: SimplicialPoset, z: FaceId, C: int, D: int, field: Field) -> dict[int, int]:
    return reduced_dims(summand_poset(P, z, C, D), field)


@lru_cache(maxsize=65536)
def _link_dims(P: SimplicialPoset, w: FaceId, field: Field) -> dict[int, int]:
    return reduced_dims(P.link(w), field)


@lru_cache(maxsize=65536)
def cost_cohomology(P: SimplicialPoset, w: FaceId, field: Field) -> CohomologyResult:
    """``H^*(P, cost_P(w))`` with its fixed representative cocycles."""
    return relative_complex(P, P.costar(w)).cohomology(field)


def local_cohomology(P: SimplicialPoset, alpha: Sequence[int], field: Field = QQ) -> LocalCohResult:
    """Graded piece of local cohomology, degrees ``0 .. dim(P) + 1``."""
    alpha = tuple(alpha)
    top = P.dim + 1
    dims = {i: 0 for i in range(top + 1)}
    if any(a > 0 for a in alpha):
        return LocalCohResult(alpha, dims, [], dict(dims))
    s = mask_of(i for i, a in enumerate(alpha) if a)
    k = s.bit_count()
    summands = []
    cost = dict(dims)
    for w in P.faces_with_support(s):
        h = _link_dims(P, w, field)
        ds = {i: h.get(i - k - 1, 0) for i in dims}
        summands.append((w, ds))
        rel = cost_cohomology(P, w, field).dims
        for i in dims:
            dims[i] += ds[i]
            cost[i] += rel.get(i - 1, 0)
    return LocalCohResult(alpha, dims, summands, cost)


def lk_cost_check(P: SimplicialPoset, y: FaceId, field: Field = QQ) -> tuple[bool, dict[int, int], dict[int, int]]:
    """Compare ``H~^{i-|supp y|-1}(lk y)`` with ``H^{i-1}(P, cost y)`` for ``i = 0 .. dim(P) + 1``."""
    if y == 0:
        raise ValueError("the bottom element has no costar pair")
    k = P.rank[y]
    h = _link_dims(P, y, field)
    rel = cost_cohomology(P, y, field).dims
    link_side = {i: h.get(i - k - 1, 0) for i in range(P.dim + 2)}
    cost_side = {i: rel.get(i - 1, 0) for i in range(P.dim + 2)}
    return link_side == cost_side, link_side, cost_side


def summand_faces(P: SimplicialPoset, alpha: Sequence[int]) -> tuple[FaceId, ...]:
    """Faces indexing the summands of the graded piece at ``alpha`` (empty unless ``alpha <= 0``)."""
    if any(a > 0 for a in alpha):
        return ()
    return P.faces_with_support(mask_of(i for i, a in enumerate(alpha) if a))


def structure_maps(P: SimplicialPoset, alpha: Sequence[int], j: int, field: Field = QQ) -> dict[int, np.ndarray]:
    """Multiplication by ``x_j`` between graded pieces, one matrix per degree.

    Rows and columns are the stacked bases of ``H^{i-1}(P, cost_P(w))``,
    blocks in FaceId order of ``w``.  ``j`` is a 0-based vertex index.
    """
    alpha = tuple(alpha)
    gamma = tuple(a + (1 if i == j else 0) for i, a in enumerate(alpha))
    src, tgt = summand_faces(P, alpha), summand_faces(P, gamma)
    out = {}
    for i in range(P.dim + 2):
        rows = [cost_cohomology(P, z, field).dims.get(i - 1, 0) for z in tgt]
        cols = [cost_cohomology(P, w, field).dims.get(i - 1, 0) for w in src]
        M = field.zeros(sum(rows), sum(cols))
        if src and tgt:
            if alpha[j] < -1:
                assert src == tgt
                M = field.eye(sum(cols))
            elif alpha[j] == -1:
                r0 = 0
                for z, nr in zip(tgt, rows):
                    c0 = 0
                    for w, nc in zip(src, cols):
                        if nr and nc and P.restrict_face(w, P.support[w] & ~(1 << j)) == z:
                            M[r0:r0 + nr, c0:c0 + nc] = _pair_map(P, z, w, field, i - 1)
                        c0 += nc
                    r0 += nr
        out[i] = M
    return out


def _pair_map(P: SimplicialPoset, z: FaceId, w: FaceId, field: Field, q: int) -> np.ndarray:
    """``H^q(P, cost w) -> H^q(P, cost z)`` for ``z`` below ``w`` (so ``cost z`` sits inside ``cost w``)."""
    return induced_map_of_pairs(P, P.costar(z), P.costar(w), field, q)
