"""The Lazard ring, presented degree by degree.

Generators are ``a_ij`` (``i <= j``) standing for the coefficient of
``u^i v^j`` (and of ``u^j v^i``) in the universal law, with ring degree
``i + j - 1``.  Relations are the coefficients of
``F(F(u,v),w) - F(u,F(v,w))``.  In each degree ``n`` the ideal is a
finite integer lattice in the span of the degree-``n`` monomials,
generated by the new relations of degree ``n`` together with each
generator times the lattice one generator-degree down.  Normal forms
are computed by Hermite reduction against that lattice.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping

from .errors import DomainMismatchError, InvalidFGLError, OutOfRangeError
from .exactalg.intmat import LatticeReduction
from .exactalg.poly import Poly, PolyRing, Variable, ZZ
from .fgl import UV, FormalGroupLaw
from .series import TruncatedSeries


def generator_name(i: int, j: int) -> str:
    if i < 10 and j < 10:
        return f"a{i}{j}"
    return f"a{i}_{j}"


class LazardRing:
    """Degreewise presentation of the Lazard ring up to degree ``max_degree``."""

    is_rational = False
    graded = True

    def __init__(self, max_degree: int):
        if max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        self.max_degree = N = max_degree
        self.pairs = [
            (i, j)
            for d in range(1, N + 1)
            for i in range(1, (d + 1) // 2 + 1)
            for j in (d + 1 - i,)
            if i <= j
        ]
        self.polys = PolyRing([Variable(generator_name(i, j), i + j - 1) for i, j in self.pairs], ZZ)
        self._build_relations()
        self._build_lattices()

    def __repr__(self):
        return f"LazardRing(max_degree={self.max_degree})"

    # --- construction -------------------------------------------------
    def gen(self, i: int, j: int) -> Poly:
        i, j = min(i, j), max(i, j)
        if i + j - 1 > self.max_degree:
            raise OutOfRangeError(f"a_{i}{j} has degree beyond {self.max_degree}")
        return self.polys.gen(generator_name(i, j))

    def free_universal_series(self, order: int | None = None) -> TruncatedSeries:
        """``u + v + sum a_ij u^i v^j`` over the free polynomial ring."""
        order = self.max_degree + 1 if order is None else order
        if order > self.max_degree + 1:
            raise OutOfRangeError(f"order {order} needs generators beyond degree {self.max_degree}")
        one = self.polys.one
        terms = {(1, 0): one, (0, 1): one}
        for i, j in self.pairs:
            if i + j <= order:
                a = self.gen(i, j)
                terms[(i, j)] = a
                terms[(j, i)] = a
        return TruncatedSeries(self.polys, UV, order, terms)

    def _build_relations(self):
        F = self.free_universal_series()
        N1 = F.order
        uvw = ("u", "v", "w")
        u, v, w = (TruncatedSeries.variable(self.polys, uvw, N1, n) for n in uvw)
        left = F.substitute({"u": F.substitute({"u": u, "v": v}), "v": w})
        right = F.substitute({"u": u, "v": F.substitute({"u": v, "v": w})})
        diff = left - right
        self.relations: dict[tuple[int, int, int], Poly] = dict(diff.sorted_items())

    def relations_of_degree(self, n: int) -> list[Poly]:
        return [r for e, r in self.relations.items() if sum(e) - 1 == n]

    def _build_lattices(self):
        ring = self.polys
        N = self.max_degree
        # monomial basis per degree, generated by multiplying up
        basis: dict[int, list[int]] = {0: [0]}
        gens = [(ring.pack({v.name: 1}), v.degree) for v in ring.variables]
        for n in range(1, N + 1):
            seen = set()
            for g, d in gens:
                if d <= n:
                    for m in basis[n - d]:
                        seen.add(m + g)

            def key(m):
                return tuple(reversed(ring.unpack(m)))

            basis[n] = sorted(seen, key=key, reverse=True)
        self.monomial_basis = basis
        self.column = {n: {m: k for k, m in enumerate(ms)} for n, ms in basis.items()}
        self.lattices: dict[int, LatticeReduction] = {}
        for n in range(1, N + 1):
            lat = LatticeReduction(len(basis[n]))
            col = self.column[n]
            for r in self.relations_of_degree(n):
                lat.add(self._vector(r, n))
            for g, d in gens:
                if d < n:
                    lower = self.lattices[n - d]
                    lower_basis = basis[n - d]
                    for row in lower.basis:
                        vec = [0] * lat.dim
                        for k, c in enumerate(row):
                            if c:
                                vec[col[lower_basis[k] + g]] = c
                        lat.add(vec)
            self.lattices[n] = lat

    def _vector(self, p: Poly, n: int) -> list[int]:
        col = self.column[n]
        vec = [0] * len(col)
        for m, c in p.terms.items():
            vec[col[m]] = c
        return vec

    # --- queries ------------------------------------------------------
    def reduce(self, p: Poly) -> Poly:
        """Canonical representative of ``p`` modulo the relation ideal."""
        if p.ring is not self.polys and p.ring != self.polys:
            raise DomainMismatchError("polynomial does not live in the Lazard generator ring")
        if len(p.terms) <= 1 and (not p.terms or 0 in p.terms):
            return p
        ring = self.polys
        parts: dict[int, dict] = {}
        for m, c in p.terms.items():
            parts.setdefault(ring.monomial_degree(m), {})[m] = c
        out = {}
        for n, terms in parts.items():
            if n == 0:
                out.update(terms)
                continue
            if n > self.max_degree:
                raise OutOfRangeError(f"degree {n} exceeds the presented range {self.max_degree}")
            lat = self.lattices[n]
            if not lat.basis:
                out.update(terms)
                continue
            col = self.column[n]
            vec = [0] * lat.dim
            for m, c in terms.items():
                vec[col[m]] = c
            vec = lat.reduce(vec)
            ms = self.monomial_basis[n]
            for k, c in enumerate(vec):
                if c:
                    out[ms[k]] = c
        return Poly(ring, out)

    normal_form = reduce

    def degree_rank(self, n: int) -> int:
        if not 1 <= n <= self.max_degree:
            raise OutOfRangeError(f"degree {n} outside 1..{self.max_degree}")
        return self.lattices[n].quotient_rank

    def torsion(self, n: int) -> list[int]:
        if not 1 <= n <= self.max_degree:
            raise OutOfRangeError(f"degree {n} outside 1..{self.max_degree}")
        return self.lattices[n].torsion

    def rank_table(self) -> list[dict]:
        rows = []
        for n in range(1, self.max_degree + 1):
            lat = self.lattices[n]
            rows.append(
                {
                    "degree": n,
                    "monomials": lat.dim,
                    "relation_rank": lat.rank,
                    "quotient_rank": lat.quotient_rank,
                    "torsion": lat.torsion,
                }
            )
        return rows

    def universal_law(self, order: int | None = None) -> FormalGroupLaw:
        """The universal law with coefficients in normal form."""
        F = self.free_universal_series(order)
        red = TruncatedSeries(self, UV, F.order, {e: self.reduce(c) for e, c in F.terms.items()})
        return FormalGroupLaw(red, f"universal:{F.order}")

    def element(self, x) -> Poly:
        """Coerce and reduce (accepts polynomial strings)."""
        return self.reduce(self.polys(x))


@lru_cache(maxsize=None)
def build(max_degree: int) -> LazardRing:
    return LazardRing(max_degree)


def universal(order: int = 8) -> FormalGroupLaw:
    """Universal law truncated at ``order`` (Lazard ring up to ``order - 1``)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    if order == 1:
        ring = build(1)
        return ring.universal_law(1)
    return build(order - 1).universal_law(order)


class CoefficientMap:
    """Ring homomorphism between coefficient rings, given on generators."""

    def __init__(self, source, target, images: Mapping[str, object]):
        self.source = source
        self.target = target
        self.images = {}
        for v in source.polys.variables:
            if v.name not in images:
                raise DomainMismatchError(f"no image for generator {v.name!r}")
            self.images[v.name] = target.polys(images[v.name])

    def __call__(self, p: Poly) -> Poly:
        return self.apply(p)

    def apply(self, p: Poly) -> Poly:
        if p.ring != self.source.polys:
            raise DomainMismatchError("element is not in the source ring")
        return self.target.reduce(p.evaluate(self.images, self.target.polys))

    def apply_series(self, s: TruncatedSeries) -> TruncatedSeries:
        if s.ring is not self.source and s.ring != self.source:
            raise DomainMismatchError("series is not over the source ring")
        return s.map_coefficients(self.apply, self.target)

    def apply_law(self, law: FormalGroupLaw) -> FormalGroupLaw:
        return FormalGroupLaw(self.apply_series(law.series), f"{law.name}->image")

    def then(self, other: CoefficientMap) -> CoefficientMap:
        """Composite ``other o self``."""
        if other.source != self.target and other.source is not self.target:
            raise DomainMismatchError("maps do not compose")
        images = {name: other.apply(img) for name, img in self.images.items()}
        cls = RingMap if isinstance(self, RingMap) else CoefficientMap
        return cls(self.source, other.target, images)

    def to_json(self) -> dict:
        return {name: str(img) for name, img in self.images.items()}


class RingMap(CoefficientMap):
    """A map out of the Lazard ring; every relation must map to zero."""

    def __init__(self, source: LazardRing, target, images: Mapping[str, object]):
        super().__init__(source, target, images)
        for e, r in source.relations.items():
            img = self.apply(r)
            if img:
                raise InvalidFGLError(
                    f"relation at u^{e[0]} v^{e[1]} w^{e[2]} maps to {img}, not 0"
                )


def classifying_map(lazard: LazardRing, law: FormalGroupLaw) -> RingMap:
    """The map sending ``a_ij`` to the ``u^i v^j`` coefficient of ``law``."""
    if law.order < lazard.max_degree + 1:
        raise OutOfRangeError(
            f"law of order {law.order} cannot classify generators up to degree {lazard.max_degree}"
        )
    law.require_valid()
    images = {generator_name(i, j): law.coefficient(i, j) for i, j in lazard.pairs}
    return RingMap(lazard, law.ring, images)
