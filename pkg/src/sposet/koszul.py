"""Brute-force ``Ext_A^i(A/m_l, A_P)_alpha`` from the Koszul Hom complex.

Degree ``t`` of ``Hom_A(K^l, A_P)_alpha`` has basis ``f_{F,m}``: ``F`` a
``t``-subset of vertices (stored as a bitmask) and ``m`` a standard monomial
of degree ``l * 1_F + alpha``.  The differential sends ``f_{F,m}`` to
``sum_{j not in F} (-1)^{#{i in F: i < j}} f_{F+j, x_j^l m}`` with
``x_j^l m`` expanded through :meth:`FaceRing.vertex_power_terms`.

Bases are ordered by ``F`` (size, then lexicographic) and then by the
leading variable of ``m``.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .cochains import CochainComplex, CohomologyResult, induced_map, poset_complex, relative_complex
from .facering import RingElement, StandardMonomial, ring_of
from .linalg import QQ, Field
from .poset import FaceId, ProductPoset, SimplicialPoset, bits, mask_of

HomBasisElement = tuple[int, StandardMonomial]


class RankMismatch(AssertionError):
    """The phi label of a Hom basis element has the wrong rank (an internal bug)."""


class OutOfStableRange(UserWarning):
    """Some ``alpha_i < 1 - l``: the level map need not be an isomorphism."""


@dataclass(frozen=True)
class MultiDegree:
    """A degree ``alpha`` together with its B/C/D split at level ``ell``."""

    alpha: tuple[int, ...]
    ell: int

    @property
    def B(self) -> int:
        return mask_of(i for i, a in enumerate(self.alpha) if -self.ell < a < 0)

    @property
    def C(self) -> int:
        return mask_of(i for i, a in enumerate(self.alpha) if a == -self.ell)

    @property
    def D(self) -> int:
        return mask_of(i for i, a in enumerate(self.alpha) if a > 0)

    @property
    def support(self) -> int:
        return mask_of(i for i, a in enumerate(self.alpha) if a)

    @property
    def negative_part(self) -> tuple[int, ...]:
        return tuple(a if a < 0 else 0 for a in self.alpha)

    @property
    def negative_support(self) -> int:
        return mask_of(i for i, a in enumerate(self.alpha) if a < 0)

    @property
    def in_range(self) -> bool:
        return all(a >= -self.ell for a in self.alpha)

    @property
    def stable(self) -> bool:
        """``1 - l <= alpha_i <= 0`` for all ``i``."""
        return all(1 - self.ell <= a <= 0 for a in self.alpha)


@dataclass
class GradedExtPiece:
    P: SimplicialPoset
    ell: int
    alpha: tuple[int, ...]
    complex: CochainComplex
    _coh: dict[Field, CohomologyResult] = dc_field(default_factory=dict, repr=False)

    @property
    def degree(self) -> MultiDegree:
        return MultiDegree(self.alpha, self.ell)

    def basis(self, t: int) -> list[HomBasisElement]:
        return self.complex.bases.get(t, [])

    def dims(self, field: Field = QQ) -> dict[int, int]:
        return self.complex.dims(field)

    def cohomology(self, field: Field = QQ) -> CohomologyResult:
        hit = self._coh.get(field)
        if hit is None:
            hit = self._coh[field] = self.complex.cohomology(field)
        return hit

    def labels(self) -> dict[int, list[tuple[HomBasisElement, tuple[int, int]]]]:
        """Each basis element with its phi label ``(w, y)``, per degree."""
        return {t: [(f, phi_label(self.P, self.ell, self.alpha, f)) for f in self.basis(t)] for t in self.complex.degrees}

    def describe(self, f: HomBasisElement) -> dict:
        F, m = f
        ring = ring_of(self.P)
        w, y = phi_label(self.P, self.ell, self.alpha, f)
        return {
            "F": [i + 1 for i in bits(F)],
            "m": ring.format_monomial(m),
            "phi": [self.P.labels[w], self.P.labels[y]],
        }


def _subsets(n: int, t: int) -> list[int]:
    return [mask_of(c) for c in combinations(range(n), t)]


@lru_cache(maxsize=8192)
def hom_complex(P: SimplicialPoset, ell: int, alpha: tuple[int, ...]) -> GradedExtPiece:
    """``Hom_A(K^l, A_P)_alpha`` with bases and differentials (no cohomology yet)."""
    alpha = tuple(alpha)
    n = P.n_vertices
    if ell < 1:
        raise ValueError("level must be at least 1")
    if len(alpha) != n:
        raise ValueError(f"alpha has length {len(alpha)}, expected {n}")
    ring = ring_of(P)
    bases: dict[int, list[HomBasisElement]] = {t: [] for t in range(n + 1)}
    if all(a >= -ell for a in alpha):
        for t in range(n + 1):
            for F in _subsets(n, t):
                delta = tuple(a + (ell if F >> i & 1 else 0) for i, a in enumerate(alpha))
                if min(delta, default=0) < 0:
                    continue
                bases[t].extend((F, m) for m in ring.graded_piece_basis(delta))
    d: dict[int, np.ndarray] = {}
    for t in range(n):
        src, tgt = bases[t], bases[t + 1]
        if not src or not tgt:
            continue
        row = {b: k for k, b in enumerate(tgt)}
        D = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for c, (F, m) in enumerate(src):
            for j in range(n):
                if F >> j & 1:
                    continue
                sign = -1 if (F & ((1 << j) - 1)).bit_count() % 2 else 1
                G = F | 1 << j
                for mz in ring.vertex_power_terms(j, ell, m):
                    D[row[(G, mz)], c] += sign
        d[t] = D
    return GradedExtPiece(P, ell, alpha, CochainComplex(bases, d))


def ext_dims_bruteforce(P: SimplicialPoset, ell: int, alpha: Sequence[int], field: Field = QQ) -> dict[int, int]:
    return hom_complex(P, ell, tuple(alpha)).dims(field)


# -- the phi correspondence ---------------------------------------------------


def phi_label(P: SimplicialPoset, ell: int, alpha: Sequence[int], f: HomBasisElement) -> tuple[FaceId, FaceId]:
    """``phi(f_{F,m}) = (w, y)``: ``y`` the leading variable of ``m``, ``w = y_{D & F}``."""
    F, m = f
    deg = MultiDegree(tuple(alpha), ell)
    y = m.leading
    w = P.restrict_face(y, deg.D & F)
    rank = P.rank[w] + P.rank[y] - (deg.B | deg.D).bit_count()
    if rank != F.bit_count() - deg.negative_support.bit_count():
        raise RankMismatch(f"phi label ({P.labels[w]}, {P.labels[y]}) has rank {rank} for |F| = {F.bit_count()}")
    return w, y


def phi_inverse(P: SimplicialPoset, ell: int, alpha: Sequence[int], w: FaceId, y: FaceId) -> HomBasisElement:
    """Rebuild ``(F, m)`` from a label ``(w, y)``; ``m`` is the level-set monomial topped by ``y``."""
    deg = MultiDegree(tuple(alpha), ell)
    sw, sy = P.support[w], P.support[y]
    F = deg.C | (sy & ~(deg.D & ~sw))
    delta = tuple(a + (ell if F >> i & 1 else 0) for i, a in enumerate(alpha))
    for m in ring_of(P).graded_piece_basis(delta):
        if m.leading == y:
            return F, m
    raise ValueError(f"no standard monomial of degree {delta} led by {P.labels[y]}")


def summand_poset(P: SimplicialPoset, z: FaceId, C: int, D: int) -> ProductPoset:
    """``[0^, z_D] x lk_P(z)_{V \\ C}`` as a simplicial poset."""
    lower = P.interval_below(P.restrict_face(z, D)).as_poset()
    full = (1 << P.n_vertices) - 1
    upper = P.link(z).restrict_parent_vertices(full & ~C).as_poset()
    return ProductPoset(lower, upper)


def _summand_parent_pair(Q: ProductPoset, k: int, link_of_z) -> tuple[int, int]:
    a, b = Q.unpair(k)
    return Q.left.to_parent[a], link_of_z.to_parent[Q.right.to_parent[b]]


def phi_target_complex(P: SimplicialPoset, ell: int, alpha: Sequence[int]) -> CochainComplex:
    """Direct sum over ``supp(z) = B | D`` of the summand posets' cochain complexes,
    re-indexed so Koszul degree ``t`` sits at rank ``t - |supp(alpha^-)|``.

    Basis labels are ``(w, y)`` pairs of faces of ``P``.
    """
    deg = MultiDegree(tuple(alpha), ell)
    n = P.n_vertices
    shift = deg.negative_support.bit_count()
    bases: dict[int, list] = {t: [] for t in range(n + 1)}
    blocks: dict[int, list[np.ndarray]] = {t: [] for t in range(n + 1)}
    if deg.in_range:
        for z in P.faces_with_support(deg.B | deg.D):
            Q = summand_poset(P, z, deg.C, deg.D)
            lk = P.link(z)
            cx = poset_complex(Q)
            for t in range(n + 1):
                q = t - shift - 1
                bases[t].extend(_summand_parent_pair(Q, k, lk) for k in cx.bases.get(q, []))
                blocks[t].append(cx.differential(q))
    d = {}
    for t in range(n):
        if bases[t] and bases[t + 1]:
            d[t] = _block_diag(blocks[t], len(bases[t + 1]), len(bases[t]))
    return CochainComplex(bases, d)


def _block_diag(mats: list[np.ndarray], rows: int, cols: int) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for M in mats:
        out[r:r + M.shape[0], c:c + M.shape[1]] = M
        r += M.shape[0]
        c += M.shape[1]
    assert (r, c) == (rows, cols)
    return out


@dataclass
class PhiCheck:
    bijective: bool
    chain_isomorphism: bool
    signs: dict[HomBasisElement, int]
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.bijective and self.chain_isomorphism


def phi_chain_isomorphism(P: SimplicialPoset, ell: int, alpha: Sequence[int], char2: bool = False) -> PhiCheck:
    """Check that phi, up to one sign per basis element, is an isomorphism of complexes.

    Signs are propagated along the nonzero entries of the Koszul differential
    and every entry is then re-verified.  With ``char2`` only the supports of
    the differentials are compared.
    """
    alpha = tuple(alpha)
    piece = hom_complex(P, ell, alpha)
    target = phi_target_complex(P, ell, alpha)
    src = piece.complex
    phi = {}
    for t in src.degrees:
        labels = [phi_label(P, ell, alpha, f) for f in src.bases[t]]
        if sorted(labels) != sorted(target.bases.get(t, [])) or len(set(labels)) != len(labels):
            return PhiCheck(False, False, {}, f"phi is not a bijection in degree {t}")
        phi.update(zip(src.bases[t], labels))

    edges: dict[HomBasisElement, list[tuple[HomBasisElement, int]]] = {}
    for t in src.degrees:
        if t + 1 not in src.bases:
            continue
        dk = src.differential(t)
        dt = target.differential(t)
        tpos_r = target.index(t + 1)
        tpos_c = target.index(t)
        for c, fc in enumerate(src.bases[t]):
            tc = tpos_c[phi[fc]]
            expected = {tpos_r[phi[src.bases[t + 1][r]]]: int(dk[r, c]) for r in np.nonzero(dk[:, c])[0]}
            actual = {int(r): int(dt[r, tc]) for r in np.nonzero(dt[:, tc])[0]}
            if char2:
                expected = {r: v for r, v in expected.items() if v % 2}
                actual = {r: v for r, v in actual.items() if v % 2}
            if set(expected) != set(actual):
                return PhiCheck(True, False, {}, f"support mismatch at {piece.describe(fc)}")
            if char2:
                continue
            for r in np.nonzero(dk[:, c])[0]:
                fr = src.bases[t + 1][r]
                a, b = int(dk[r, c]), actual[tpos_r[phi[fr]]]
                if abs(a) != abs(b):
                    return PhiCheck(True, False, {}, f"entry mismatch at {piece.describe(fc)}")
                rel = 1 if a == b else -1
                edges.setdefault(fc, []).append((fr, rel))
                edges.setdefault(fr, []).append((fc, rel))

    signs: dict[HomBasisElement, int] = {}
    for t in src.degrees:
        for f in src.bases[t]:
            if f in signs:
                continue
            signs[f] = 1
            queue = deque([f])
            while queue:
                g = queue.popleft()
                for h, rel in edges.get(g, ()):
                    want = signs[g] * rel
                    if h not in signs:
                        signs[h] = want
                        queue.append(h)
                    elif signs[h] != want:
                        return PhiCheck(True, False, {}, "no consistent choice of signs")
    return PhiCheck(True, True, signs)


# -- maps between graded pieces -------------------------------------------------


def _scatter(target: GradedExtPiece, t: int, images: list[tuple[int, RingElement]]) -> np.ndarray:
    row = target.complex.index(t)
    M = np.zeros((len(target.basis(t)), len(images)), dtype=np.int64)
    for c, (F, elt) in enumerate(images):
        for m, coeff in elt.terms.items():
            M[row[(F, m)], c] += int(coeff)
    return M


def level_chain_map(P: SimplicialPoset, ell: int, alpha: Sequence[int]) -> dict[int, np.ndarray]:
    """Chain map ``f_{F,m} -> f_{F, (prod_{i in F} x_i) m}`` from level ``l`` to ``l + 1``."""
    alpha = tuple(alpha)
    src = hom_complex(P, ell, alpha)
    tgt = hom_complex(P, ell + 1, alpha)
    ring = ring_of(P)
    out = {}
    for t in src.complex.degrees:
        images = []
        for F, m in src.basis(t):
            elt = ring.element(m)
            for i in bits(F):
                elt = ring.multiply_vertex_power(i, 1, elt)
            images.append((F, elt))
        out[t] = _scatter(tgt, t, images)
    return out


def level_map(P: SimplicialPoset, ell: int, alpha: Sequence[int], field: Field = QQ) -> dict[int, np.ndarray]:
    """Matrices of ``Ext^i`` at level ``l`` -> level ``l + 1`` in the stored cohomology bases."""
    alpha = tuple(alpha)
    if any(a < 1 - ell for a in alpha):
        warnings.warn(OutOfStableRange(f"alpha={alpha} is outside the stable range for level {ell}"), stacklevel=2)
    src = hom_complex(P, ell, alpha).cohomology(field)
    tgt = hom_complex(P, ell + 1, alpha).cohomology(field)
    chain = level_chain_map(P, ell, alpha)
    return {t: induced_map(src, tgt, chain[t], t) for t in chain}


def vertex_chain_map(P: SimplicialPoset, ell: int, alpha: Sequence[int], j: int, power: int = 1) -> dict[int, np.ndarray]:
    """Chain map ``f_{F,m} -> f_{F, x_j^power m}`` into degree ``alpha + power*e_j``."""
    alpha = tuple(alpha)
    gamma = tuple(a + (power if i == j else 0) for i, a in enumerate(alpha))
    src = hom_complex(P, ell, alpha)
    tgt = hom_complex(P, ell, gamma)
    ring = ring_of(P)
    out = {}
    for t in src.complex.degrees:
        images = [(F, ring.multiply_vertex_power(j, power, m)) for F, m in src.basis(t)]
        out[t] = _scatter(tgt, t, images)
    return out


def mult_by_vertex(P: SimplicialPoset, ell: int, alpha: Sequence[int], j: int, field: Field = QQ, power: int = 1) -> dict[int, np.ndarray]:
    """``Ext^i_alpha -> Ext^i_{alpha + power*e_j}`` induced by multiplication with ``x_j^power``."""
    alpha = tuple(alpha)
    gamma = tuple(a + (power if i == j else 0) for i, a in enumerate(alpha))
    src = hom_complex(P, ell, alpha).cohomology(field)
    tgt = hom_complex(P, ell, gamma).cohomology(field)
    chain = vertex_chain_map(P, ell, alpha, j, power)
    return {t: induced_map(src, tgt, chain[t], t) for t in chain}


# -- transport to the relative-cohomology description ---------------------------


def stable_sign(P: SimplicialPoset, y: FaceId) -> int:
    """``(-1)^{binom(|supp y|, 2)}``: relates the Koszul sign rule to the natural orientation."""
    r = P.rank[y]
    return -1 if (r * (r - 1) // 2) % 2 else 1


def summand_faces(P: SimplicialPoset, alpha: Sequence[int]) -> tuple[int, ...]:
    return P.faces_with_support(mask_of(i for i, a in enumerate(alpha) if a))


def stable_transport(P: SimplicialPoset, ell: int, alpha: Sequence[int]) -> dict[int, np.ndarray]:
    """Signed matrices taking Koszul degree ``t`` into ``(+)_w C^{t-1}(P, cost_P(w))``.

    Valid in the stable range, where ``f_{F,m}`` corresponds to the face
    ``y = lead(m)`` lying above exactly one ``w`` with ``supp(w) = supp(alpha)``.
    The summands are stacked in FaceId order of ``w``.
    """
    alpha = tuple(alpha)
    if not MultiDegree(alpha, ell).stable:
        raise ValueError(f"alpha={alpha} is outside the stable range for level {ell}")
    piece = hom_complex(P, ell, alpha)
    ws = summand_faces(P, alpha)
    out = {}
    for t in piece.complex.degrees:
        target = []
        for w in ws:
            target.extend((w, y) for y in relative_complex(P, P.costar(w)).bases.get(t - 1, []))
        pos = {lab: k for k, lab in enumerate(target)}
        M = np.zeros((len(target), len(piece.basis(t))), dtype=np.int64)
        for c, f in enumerate(piece.basis(t)):
            y = f[1].leading
            w = P.restrict_face(y, mask_of(i for i, a in enumerate(alpha) if a))
            M[pos[(w, y)], c] = stable_sign(P, y)
        out[t] = M
    return out


def relative_summand_cohomology(P: SimplicialPoset, alpha: Sequence[int], field: Field) -> list[tuple[int, CohomologyResult]]:
    return [(w, relative_complex(P, P.costar(w)).cohomology(field)) for w in summand_faces(P, alpha)]


def class_transport(P: SimplicialPoset, ell: int, alpha: Sequence[int], field: Field = QQ) -> dict[int, np.ndarray]:
    """Coordinates of the Koszul cohomology basis (degree ``i``) in the stacked
    relative-cohomology bases of ``H^{i-1}(P, cost_P(w))``."""
    alpha = tuple(alpha)
    coh = hom_complex(P, ell, alpha).cohomology(field)
    T = stable_transport(P, ell, alpha)
    summands = relative_summand_cohomology(P, alpha, field)
    out = {}
    for t, Tt in T.items():
        image = field.matmul(field.matrix(Tt), coh.reps[t]) if coh.dims[t] else field.zeros(Tt.shape[0], 0)
        parts = []
        r = 0
        for w, h in summands:
            size = len(relative_complex(P, P.costar(w)).bases.get(t - 1, []))
            parts.append(h.coordinates(t - 1, image[r:r + size, :]))
            r += size
        out[t] = np.concatenate(parts, axis=0) if parts else field.zeros(0, coh.dims[t])
    return out


def transported_mult_by_vertex(
    P: SimplicialPoset, ell: int, alpha: Sequence[int], j: int, field: Field = QQ, power: int = 1
) -> dict[int, np.ndarray]:
    """``mult_by_vertex`` rewritten in the relative-cohomology bases used by the topological formulas."""
    alpha = tuple(alpha)
    gamma = tuple(a + (power if i == j else 0) for i, a in enumerate(alpha))
    M = mult_by_vertex(P, ell, alpha, j, field, power)
    if not MultiDegree(gamma, ell).stable:
        return M  # gamma_j > 0, so every target piece is zero
    Sa = class_transport(P, ell, alpha, field)
    Sg = class_transport(P, ell, gamma, field)
    out = {}
    for t, m in M.items():
        if Sa[t].shape[0] == 0:
            out[t] = field.zeros(Sg[t].shape[0], 0)
            continue
        inv = field.express(Sa[t], field.eye(Sa[t].shape[0]))
        out[t] = field.matmul(field.matmul(Sg[t], m), inv)
    return out
