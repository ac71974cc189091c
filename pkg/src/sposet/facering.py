"""The face ring ``A_P`` in its standard-monomial basis.

A standard monomial is a product ``y_1^p_1 ... y_k^p_k`` along a strictly
descending chain ``y_1 > ... > y_k`` of non-bottom faces.  These monomials
form a basis of ``A_P``; ring elements are stored in that basis only.

Two multiplication routes exist and are kept independent:

* :meth:`FaceRing.multiply` rewrites arbitrary words with the defining
  relations ``w*y = (w ^ y) * sum_{z in M(w, y)} z`` until they are chains;
* :meth:`FaceRing.multiply_vertex_power` builds ``x_j^l * m`` directly as a
  sum of standard monomials, one per ``z`` in ``M(x_j, y_1)``.
"""

from __future__ import annotations

import re
from collections import defaultdict
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .linalg import Field
from .poset import BOTTOM_LABEL, FaceId, SimplicialPoset, bits

MAX_REWRITES = 1_000_000


class NonTermination(RuntimeError):
    """Straightening exceeded the rewrite cap."""


class ParseError(ValueError):
    pass


class StandardMonomial(tuple):
    """Tuple of ``(face, exponent)`` pairs along a strictly descending chain."""

    __slots__ = ()

    @property
    def leading(self) -> FaceId:
        """Leading variable; the bottom (0) for the unit monomial."""
        return self[0][0] if self else 0

    @property
    def faces(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self)

    @property
    def total_exponent(self) -> int:
        return sum(p for _, p in self)


ONE = StandardMonomial(())


def _merge(prefix: Iterable[tuple[int, int]], suffix: Iterable[tuple[int, int]]) -> StandardMonomial:
    out: list[tuple[int, int]] = []
    for f, p in list(prefix) + list(suffix):
        if p <= 0:
            continue
        if out and out[-1][0] == f:
            out[-1] = (f, out[-1][1] + p)
        else:
            out.append((f, p))
    return StandardMonomial(out)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class RingElement:
    """Finite linear combination of standard monomials with nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "FaceRing", terms: Mapping[StandardMonomial, object] | None = None):
        self.ring = ring
        self.terms: dict[StandardMonomial, object] = {}
        for m, c in (terms or {}).items():
            if c:
                self.terms[m] = _norm(c)

    def __repr__(self) -> str:
        return f"RingElement({self.ring.format(self)!r})"

    def __str__(self) -> str:
        return self.ring.format(self)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, RingElement):
            return self.ring.P is other.ring.P and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            return other
        if isinstance(other, Rational):
            return self.ring.scalar(other)
        raise TypeError(f"cannot combine RingElement with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return RingElement(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Rational):
            return RingElement(self.ring, {m: c * other for m, c in self.terms.items()})
        return self.ring.multiply(self, other)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, q: int):
        out = self.ring.one()
        for _ in range(q):
            out = self.ring.multiply(out, self)
        return out

    @property
    def monomials(self) -> list[StandardMonomial]:
        return sorted(self.terms)

    def degrees(self) -> set[tuple[int, ...]]:
        return {self.ring.degree(m) for m in self.terms}

    def reduce(self, field: Field) -> "RingElement":
        """Coefficients mapped into ``field`` (integers mod p for GF(p))."""
        return RingElement(self.ring, {m: field.elem(c) for m, c in self.terms.items()})


class FaceRing:
    """``A_P`` for a fixed simplicial poset ``P``."""

    def __init__(self, P: SimplicialPoset):
        self.P = P
        self.n = P.n_vertices
        self._vp_cache: dict[tuple[int, int, StandardMonomial], tuple[StandardMonomial, ...]] = {}
        self._basis_cache: dict[tuple[int, ...], tuple[StandardMonomial, ...]] = {}
        self._word_cache: dict[tuple[str, tuple[int, ...]], dict[StandardMonomial, int]] = {}

    # -- construction -----------------------------------------------------

    def one(self) -> RingElement:
        return RingElement(self, {ONE: 1})

    def zero(self) -> RingElement:
        return RingElement(self)

    def scalar(self, c) -> RingElement:
        return RingElement(self, {ONE: c})

    def element(self, m: StandardMonomial, c=1) -> RingElement:
        return RingElement(self, {m: c})

    def variable(self, y: FaceId) -> RingElement:
        if y == 0:
            return self.one()
        return RingElement(self, {StandardMonomial(((y, 1),)): 1})

    def vertex(self, j: int) -> RingElement:
        return self.variable(self.P.vertex_of_index[j])

    def monomial(self, factors: Iterable[tuple[FaceId, int]]) -> StandardMonomial:
        """Build a standard monomial from ``(face, exponent)`` pairs forming a chain."""
        agg: dict[int, int] = defaultdict(int)
        for f, p in factors:
            if p < 0:
                raise ValueError("negative exponent")
            if f != 0 and p:
                agg[f] += p
        faces = sorted(agg, key=lambda f: (-self.P.rank[f], f))
        for a, b in zip(faces, faces[1:]):
            if not self.P.leq(b, a) or a == b:
                raise ValueError(f"{self.P.labels[a]} and {self.P.labels[b]} are not comparable")
        return StandardMonomial((f, agg[f]) for f in faces)

    def degree(self, m: StandardMonomial) -> tuple[int, ...]:
        deg = [0] * self.n
        for f, p in m:
            for i in bits(self.P.support[f]):
                deg[i] += p
        return tuple(deg)

    def is_standard(self, m: StandardMonomial) -> bool:
        P = self.P
        if any(p < 1 or f == 0 for f, p in m):
            return False
        return all(P.leq(b, a) and a != b for (a, _), (b, _) in zip(m, m[1:]))

    # -- defining relations -------------------------------------------------

    def defining_relation(self, w: FaceId, y: FaceId) -> RingElement:
        """Normal form of ``w * y``."""
        P = self.P
        ub = P.min_upper_bounds(w, y)
        if not ub:
            return self.zero()
        meet = P.meet(w, y)
        assert meet is not None
        return RingElement(self, {self.monomial([(z, 1), (meet, 1)]): 1 for z in ub})

    def power_identity(self, w: FaceId, y: FaceId, q: int) -> RingElement:
        """``(w ^ y)^q * sum_{z in M(w, y)} z^q``, which equals ``(w y)^q``."""
        if q < 1:
            raise ValueError("q must be positive")
        P = self.P
        ub = P.min_upper_bounds(w, y)
        if not ub:
            return self.zero()
        meet = P.meet(w, y)
        assert meet is not None
        return RingElement(self, {self.monomial([(z, q), (meet, q)]): 1 for z in ub})

    # -- vertex powers (direct construction) --------------------------------

    def multiply_vertex_power(self, j: int, ell: int, m: StandardMonomial | RingElement) -> RingElement:
        """``x_j^ell * m`` (vertex index ``j`` is 0-based)."""
        if isinstance(m, RingElement):
            out: dict[StandardMonomial, object] = defaultdict(int)
            for mono, c in m.terms.items():
                for t in self.vertex_power_terms(j, ell, mono):
                    out[t] += c
            return RingElement(self, out)
        return RingElement(self, {t: 1 for t in self.vertex_power_terms(j, ell, m)})

    def vertex_power_terms(self, j: int, ell: int, m: StandardMonomial) -> tuple[StandardMonomial, ...]:
        """The monomials ``m_z``, one per ``z`` in ``M(x_j, y_1)``, in FaceId order of ``z``."""
        key = (j, ell, m)
        hit = self._vp_cache.get(key)
        if hit is None:
            hit = self._vertex_power_terms(j, ell, m)
            self._vp_cache[key] = hit
        return hit

    def _vertex_power_terms(self, j: int, ell: int, m: StandardMonomial) -> tuple[StandardMonomial, ...]:
        P = self.P
        xj = P.vertex_of_index[j]
        if ell == 0:
            return (m,)
        if not m:
            return (StandardMonomial(((xj, ell),)),)
        jbit = 1 << j
        y1 = m[0][0]
        if P.support[y1] & jbit:
            r = 0
            while r < len(m) and P.support[m[r][0]] & jbit:
                r += 1
            if r == len(m):
                return (_merge(m, [(xj, ell)]),)
            tail = StandardMonomial(m[r:])
            y_r = m[r - 1][0]
            z = P.restrict_face(y_r, P.support[tail[0][0]] | jbit)
            assert z in P.min_upper_bounds(xj, tail[0][0])
            return (_merge(m[:r], self._absorb(j, ell, tail, z)),)
        return tuple(self._absorb(j, ell, m, z) for z in P.min_upper_bounds(xj, y1))

    def _absorb(self, j: int, ell: int, m: StandardMonomial, z: FaceId) -> StandardMonomial:
        # m_z for z in M(x_j, y_1) when j is outside supp(y_1): the first ell
        # exponent units of the chain are lifted to z_i = z restricted to
        # supp(y_i) + {j}; leftover x_j power trails the chain.
        P = self.P
        jbit = 1 << j
        out: list[tuple[int, int]] = []
        used = 0
        for k, (y, p) in enumerate(m):
            zi = P.restrict_face(z, P.support[y] | jbit)
            if used + p <= ell:
                out.append((zi, p))
                used += p
                continue
            lift = ell - used
            out.append((zi, lift))
            out.append((y, p - lift))
            out.extend(m[k + 1:])
            return _merge(out, ())
        out.append((P.vertex_of_index[j], ell - used))
        return _merge(out, ())

    # -- generic multiplication (rewriting) ---------------------------------

    def multiply(self, a: RingElement, b: RingElement, strategy: str = "top") -> RingElement:
        """Product of two ring elements, reduced by straightening.

        ``strategy`` picks which non-comparable adjacent pair of the sorted
        word is rewritten first: ``"top"`` the highest, ``"bottom"`` the lowest.
        """
        if isinstance(b, Rational):
            return a * b
        out: dict[StandardMonomial, object] = defaultdict(int)
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                word = tuple(f for f, p in m1 for _ in range(p)) + tuple(f for f, p in m2 for _ in range(p))
                for m, c in self._reduce_word(word, strategy).items():
                    out[m] += c1 * c2 * c
        return RingElement(self, out)

    def normal_form(self, faces: Iterable[FaceId], strategy: str = "top") -> RingElement:
        """Straighten the product of the given faces (with repetition)."""
        return RingElement(self, self._reduce_word(tuple(faces), strategy))

    def _sort_word(self, word: Iterable[int]) -> tuple[int, ...]:
        rank = self.P.rank
        return tuple(sorted((f for f in word if f != 0), key=lambda f: (-rank[f], f)))

    def _reduce_word(self, word: tuple[int, ...], strategy: str) -> dict[StandardMonomial, int]:
        word = self._sort_word(word)
        key = (strategy, word)
        hit = self._word_cache.get(key)
        if hit is not None:
            return hit
        if strategy not in ("top", "bottom"):
            raise ValueError(f"unknown strategy {strategy!r}")
        P = self.P
        result: dict[StandardMonomial, int] = defaultdict(int)
        stack: list[tuple[int, tuple[int, ...]]] = [(1, word)]
        steps = 0
        while stack:
            c, wd = stack.pop()
            bad = [k for k in range(len(wd) - 1) if not (P.leq(wd[k + 1], wd[k]))]
            if not bad:
                result[self._word_monomial(wd)] += c
                continue
            steps += 1
            if steps > MAX_REWRITES:
                raise NonTermination(f"straightening of {[P.labels[f] for f in word]} exceeded {MAX_REWRITES} rewrites")
            k = bad[0] if strategy == "top" else bad[-1]
            w, y = wd[k], wd[k + 1]
            ub = P.min_upper_bounds(w, y)
            if not ub:
                continue
            meet = P.meet(w, y)
            assert meet is not None
            rest = wd[:k] + wd[k + 2:]
            for z in ub:
                stack.append((c, self._sort_word(rest + (z, meet))))
        out = {m: c for m, c in result.items() if c}
        self._word_cache[key] = out
        return out

    def _word_monomial(self, wd: tuple[int, ...]) -> StandardMonomial:
        return _merge(((f, 1) for f in wd), ())

    # -- graded pieces --------------------------------------------------------

    def graded_piece_basis(self, delta: Iterable[int]) -> tuple[StandardMonomial, ...]:
        """Standard monomials of multidegree ``delta`` (all entries >= 0), one per face of support ``supp(delta)``.

        For a face ``y`` with that support, the monomial is
        ``y^{p_0} * prod_j (y_{S_j})^{p_j - p_{j-1}}`` where ``p_0 < p_1 < ...``
        are the distinct positive entries of ``delta`` and ``S_j`` the indices
        where ``delta`` reaches ``p_j``.
        """
        delta = tuple(delta)
        hit = self._basis_cache.get(delta)
        if hit is not None:
            return hit
        if len(delta) != self.n or any(d < 0 for d in delta):
            raise ValueError(f"degree {delta} must be a non-negative vector of length {self.n}")
        P = self.P
        support = sum(1 << i for i, d in enumerate(delta) if d > 0)
        levels = sorted({d for d in delta if d > 0})
        out = []
        for y in P.faces_with_support(support):
            factors = []
            prev = 0
            for p in levels:
                s = sum(1 << i for i, d in enumerate(delta) if d >= p)
                factors.append((P.restrict_face(y, s), p - prev))
                prev = p
            out.append(_merge(factors, ()))
        hit = tuple(out)
        self._basis_cache[delta] = hit
        return hit

    def hilbert_function(self, delta: Iterable[int]) -> int:
        return len(self.graded_piece_basis(delta))

    # -- text syntax ------------------------------------------------------

    _IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

    def format_monomial(self, m: StandardMonomial) -> str:
        if not m:
            return "1"
        parts = []
        for f, p in m:
            lab = self.P.labels[f]
            if not self._IDENT.match(lab):
                lab = "{" + lab + "}"
            parts.append(lab if p == 1 else f"{lab}^{p}")
        return "*".join(parts)

    def format(self, a: RingElement) -> str:
        if not a.terms:
            return "0"
        out = []
        for m in sorted(a.terms, key=lambda m: (-sum(self.degree(m)), m)):
            c = a.terms[m]
            neg = c < 0
            mag = -c if neg else c
            body = self.format_monomial(m)
            if mag != 1:
                body = str(mag) if not m else f"{mag}*{body}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def parse(self, text: str) -> RingElement:
        """Parse e.g. ``T1^2*x1 - 3/2*{x1x2} + (x2*x3)^2``; the bottom ``{0^}`` reads as 1."""
        return _Parser(self, text).parse()


class _Parser:
    TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|\{([^{}]*)\}|(\S))")

    def __init__(self, ring: FaceRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = self.TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"cannot tokenise {text[pos:]!r}")
            pos = m.end()
            num, ident, braced, sym = m.groups()
            if num is not None:
                self.tokens.append(("num", num))
            elif ident is not None:
                self.tokens.append(("face", ident))
            elif braced is not None:
                self.tokens.append(("face", braced))
            else:
                self.tokens.append(("sym", sym))
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, sym: str | None = None) -> tuple[str, str]:
        tok = self.peek()
        if tok is None or (sym is not None and tok != ("sym", sym)):
            raise ParseError(f"expected {sym or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> RingElement:
        if not self.tokens:
            raise ParseError("empty expression")
        out = self.expr()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()[1]!r} in {self.text!r}")
        return out

    def expr(self) -> RingElement:
        sign = 1
        if self.peek() in (("sym", "-"), ("sym", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        out = self.term() * sign
        while self.peek() in (("sym", "-"), ("sym", "+")):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> RingElement:
        out = self.factor()
        while self.peek() == ("sym", "*"):
            self.take("*")
            out = self.ring.multiply(out, self.factor())
        return out

    def factor(self) -> RingElement:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take("^")
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer")
            base = base ** int(val)
        return base

    def atom(self) -> RingElement:
        kind, val = self.take()
        ring = self.ring
        if kind == "num":
            c = Fraction(int(val))
            if self.peek() == ("sym", "/"):
                self.take("/")
                k2, den = self.take()
                if k2 != "num" or int(den) == 0:
                    raise ParseError("bad rational coefficient")
                c /= int(den)
            return ring.scalar(c)
        if kind == "face":
            if val == BOTTOM_LABEL:
                return ring.one()
            try:
                return ring.variable(ring.P.face(val))
            except KeyError as exc:
                raise ParseError(str(exc.args[0])) from None
        if val == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


_RINGS: dict[int, FaceRing] = {}


def ring_of(P: SimplicialPoset) -> FaceRing:
    """Shared :class:`FaceRing` for ``P`` (caches are per poset)."""
    r = _RINGS.get(id(P))
    if r is None or r.P is not P:
        r = _RINGS[id(P)] = FaceRing(P)
    return r


def defining_relation(P, w, y):
    return ring_of(P).defining_relation(w, y)


def power_identity(P, w, y, q):
    return ring_of(P).power_identity(w, y, q)


def multiply_vertex_power(P, j, ell, m):
    return ring_of(P).multiply_vertex_power(j, ell, m)


def multiply(P, a, b):
    return ring_of(P).multiply(a, b)


def graded_piece_basis(P, delta):
    return ring_of(P).graded_piece_basis(delta)
