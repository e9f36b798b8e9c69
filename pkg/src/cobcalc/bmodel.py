"""Cellular free-module models of bordism groups.

A :class:`CellSpace` is a free module over the coefficient ring of an
:class:`OrientedTheory` with a basis of cells.  Every cell is presented
as a monomial ("word") in first Chern class operators applied to the
fundamental class, which is what makes intersection products
computable by operator composition.  First Chern class operators are
square matrices; maps carry push-forward and/or pull-back matrices.

Supported spaces: projective spaces ``P^n``, finite products, and
projective bundles ``P(L_0 + ... + L_e)`` of split bundles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .errors import (
    DomainMismatchError,
    OutOfRangeError,
    TheoryMismatchError,
    UnknownBundleError,
    UnregisteredMapError,
    UnsupportedClassError,
)
from .exactalg.poly import Poly
from .fgl import FormalGroupLaw
from .series import TruncatedSeries


class OrientedTheory:
    """A formal group law together with its coefficient ring."""

    def __init__(self, law: FormalGroupLaw, name: str | None = None):
        law.require_valid()
        self.law = law
        self.name = name or law.name

    @property
    def ring(self):
        return self.law.ring

    @property
    def order(self) -> int:
        return self.law.order

    @property
    def is_rational(self) -> bool:
        return self.ring.is_rational

    def __repr__(self):
        return f"OrientedTheory({self.name}, order={self.order})"

    def require_order(self, n: int):
        if self.order < n:
            raise OutOfRangeError(
                f"theory {self.name} is truncated at order {self.order}; {n} needed"
            )

    def elem(self, x) -> Poly:
        return self.ring.reduce(self.ring.polys(x))


# --- matrices -------------------------------------------------------------


class Matrix:
    """Matrix with entries in the coefficient ring, mapping ``domain`` cells
    to ``codomain`` cells (column = source cell)."""

    __slots__ = ("theory", "domain", "codomain", "entries")

    def __init__(self, theory, codomain, domain, entries):
        self.theory = theory
        self.codomain = codomain
        self.domain = domain
        self.entries = entries

    @classmethod
    def zero(cls, codomain, domain):
        z = codomain.theory.ring.polys.zero
        return cls(codomain.theory, codomain, domain, [[z] * len(domain.cells) for _ in codomain.cells])

    @classmethod
    def identity(cls, space):
        polys = space.theory.ring.polys
        n = len(space.cells)
        return cls(
            space.theory, space, space,
            [[polys.one if i == j else polys.zero for j in range(n)] for i in range(n)],
        )

    @classmethod
    def from_ints(cls, codomain, domain, rows):
        polys = codomain.theory.ring.polys
        return cls(codomain.theory, codomain, domain, [[polys.const(x) for x in r] for r in rows])

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0]) if self.entries else len(self.domain.cells)

    def _red(self, p):
        return self.theory.ring.reduce(p)

    def __matmul__(self, other: Matrix) -> Matrix:
        if other.codomain != self.domain:
            raise DomainMismatchError("matrix shapes do not compose")
        zero = self.theory.ring.polys.zero
        cols = list(zip(*other.entries)) if other.entries else [()] * len(other.domain.cells)
        out = []
        for row in self.entries:
            new_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new_row.append(self._red(acc))
            out.append(new_row)
        return Matrix(self.theory, self.codomain, other.domain, out)

    def _same(self, other: Matrix):
        if other.codomain != self.codomain or other.domain != self.domain:
            raise DomainMismatchError("matrix shapes differ")

    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        return Matrix(self.theory, self.codomain, self.domain, [
            [self._red(a + b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)
        ])

    def __sub__(self, other: Matrix) -> Matrix:
        self._same(other)
        return Matrix(self.theory, self.codomain, self.domain, [
            [self._red(a - b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)
        ])

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> Matrix:
        c = self.theory.ring.polys(c)
        return Matrix(self.theory, self.codomain, self.domain, [
            [self._red(a * c) if a else a for a in r] for r in self.entries
        ])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.codomain == other.codomain
            and self.domain == other.domain
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.entries))

    def is_zero(self) -> bool:
        return not any(x for r in self.entries for x in r)

    def __pow__(self, k: int) -> Matrix:
        out = Matrix.identity(self.domain)
        for _ in range(k):
            out = out @ self
        return out

    def apply_vector(self, vec: Sequence[Poly]) -> list[Poly]:
        zero = self.theory.ring.polys.zero
        out = []
        for row in self.entries:
            acc = zero
            for a, x in zip(row, vec):
                if a and x:
                    acc = acc + a * x
            out.append(self._red(acc))
        return out

    def __call__(self, cls: BordismClass) -> BordismClass:
        if cls.space != self.domain:
            raise DomainMismatchError("class does not live on the matrix domain")
        return BordismClass(self.codomain, self.apply_vector(cls.vector))

    def map_entries(self, fn, theory, codomain, domain) -> Matrix:
        return Matrix(theory, codomain, domain, [[fn(x) for x in r] for r in self.entries])

    def to_json(self) -> dict:
        return {
            "rows": [c.id for c in self.codomain.cells],
            "cols": [c.id for c in self.domain.cells],
            "entries": [[str(x) for x in r] for r in self.entries],
        }

    def __repr__(self):
        return "Matrix(" + "; ".join(" ".join(str(x) for x in r) for r in self.entries) + ")"


def kron(a: Matrix, b: Matrix, codomain, domain) -> Matrix:
    """Kronecker product; cell (i, j) of a product has index i * len(Y) + j."""
    red = a.theory.ring.reduce
    zero = a.theory.ring.polys.zero
    rows = []
    for ra in a.entries:
        for rb in b.entries:
            rows.append([red(x * y) if x and y else zero for x in ra for y in rb])
    return Matrix(a.theory, codomain, domain, rows)


def eval_series(series: TruncatedSeries, mats: Sequence[Matrix]) -> Matrix:
    """Evaluate a power series at pairwise commuting nilpotent matrices.

    Exact: every first Chern class operator lowers cell dimension, so
    monomials longer than the dimension of the space vanish.
    """
    if len(mats) != series.nvars:
        raise ValueError("one matrix per formal variable")
    space = mats[0].domain
    need = space.dim
    if series.order < need:
        raise OutOfRangeError(
            f"series truncated at order {series.order} but the space has dimension {need}"
        )
    powers = [[Matrix.identity(space)] for _ in mats]

    def power(i, e):
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] @ mats[i])
        return cache[e]

    total = Matrix.zero(space, space)
    for exps, c in series.sorted_items():
        if sum(exps) > need:
            continue
        term = None
        for i, e in enumerate(exps):
            if e:
                p = power(i, e)
                term = p if term is None else term @ p
        if term is None:
            term = Matrix.identity(space)
        if term.is_zero():
            continue
        total = total + term.scale(c)
    return total


# --- spaces and classes ---------------------------------------------------


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    word: tuple[tuple[str, int], ...]

    def word_str(self) -> str:
        if not self.word:
            return "1"
        return " ".join(f"c1({s})" if e == 1 else f"c1({s})^{e}" for s, e in self.word)


_O_PATTERN = re.compile(r"O\((-?\d+)\)")


class CellSpace:
    def __init__(self, theory: OrientedTheory, name: str, dim: int, cells: Sequence[Cell], recipe):
        self.theory = theory
        self.name = name
        self.dim = dim
        self.cells = list(cells)
        self.index = {c.id: k for k, c in enumerate(self.cells)}
        if len(self.index) != len(self.cells):
            raise ValueError("duplicate cell ids")
        self.recipe = recipe
        self._bundles: dict[str, Matrix] = {}
        self.generators: list[str] = []

    def __eq__(self, other):
        return isinstance(other, CellSpace) and self.recipe == other.recipe and self.theory is other.theory

    def __hash__(self):
        return hash(self.recipe)

    def __repr__(self):
        return f"CellSpace({self.name}, dim={self.dim}, cells={len(self.cells)})"

    # bundles ---------------------------------------------------------------
    def register_bundle(self, symbol: str, matrix: Matrix, generator: bool = False):
        if matrix.domain != self or matrix.codomain != self:
            raise DomainMismatchError("c1 matrix must act on this space")
        self._bundles[symbol] = matrix
        if generator and symbol not in self.generators:
            self.generators.append(symbol)

    @property
    def bundles(self) -> list[str]:
        return list(self._bundles)

    def c1(self, symbol: str) -> Matrix:
        """First Chern class operator of a (registered or derivable) bundle."""
        m = self._bundles.get(symbol)
        if m is None:
            m = self._derive(symbol)
            if m is None:
                raise UnknownBundleError(f"no line bundle {symbol!r} on {self.name}")
            self._bundles[symbol] = m
        return m

    def _derive(self, symbol: str) -> Matrix | None:
        if "⊗" in symbol:
            parts = [p.strip() for p in symbol.split("⊗")]
            acc = self.c1(parts[0])
            for p in parts[1:]:
                acc = self.tensor_matrix(acc, self.c1(p))
            return acc
        return None

    def tensor_matrix(self, a: Matrix, b: Matrix) -> Matrix:
        """``c1(L (x) M)`` from ``c1(L)`` and ``c1(M)`` via the group law."""
        return eval_series(self.theory.law.series, [a, b])

    def has_bundle(self, symbol: str) -> bool:
        try:
            self.c1(symbol)
        except UnknownBundleError:
            return False
        return True

    # classes ----------------------------------------------------------------
    @property
    def top_cell(self) -> Cell:
        for c in self.cells:
            if not c.word:
                return c
        raise UnsupportedClassError(f"{self.name} has no fundamental cell")

    def unit(self) -> BordismClass:
        polys = self.theory.ring.polys
        return BordismClass(self, [polys.one if not c.word else polys.zero for c in self.cells])

    def cell_class(self, cell_id: str, coeff=1) -> BordismClass:
        if cell_id not in self.index:
            raise KeyError(f"no cell {cell_id!r} on {self.name}")
        polys = self.theory.ring.polys
        c = self.theory.elem(coeff)
        return BordismClass(self, [c if x.id == cell_id else polys.zero for x in self.cells])

    def class_from(self, data: Mapping[str, object]) -> BordismClass:
        vec = [self.theory.ring.polys.zero] * len(self.cells)
        for cid, c in data.items():
            if cid not in self.index:
                raise KeyError(f"no cell {cid!r} on {self.name}")
            vec[self.index[cid]] = self.theory.elem(c)
        return BordismClass(self, vec)

    def word_matrix(self, word) -> Matrix:
        m = Matrix.identity(self)
        for sym, e in word:
            for _ in range(e):
                m = self.c1(sym) @ m
        return m

    def operator_of(self, cls: BordismClass) -> Matrix:
        """Operator polynomial whose value on ``1`` is ``cls``."""
        if any(not c.word and c is not self.top_cell for c in self.cells):
            raise UnsupportedClassError("cells lack an operator presentation")
        total = Matrix.zero(self, self)
        for cell, coeff in zip(self.cells, cls.vector):
            if coeff:
                total = total + self.word_matrix(cell.word).scale(coeff)
        return total

    # invariants ------------------------------------------------------------
    def check_cell_words(self) -> bool:
        """Each cell equals its word applied to the fundamental class."""
        one = self.unit()
        return all(
            self.word_matrix(c.word)(one) == self.cell_class(c.id) for c in self.cells
        )

    def lowers_degree(self, m: Matrix) -> bool:
        """Entries shift the total degree (cell dim + ring degree) by -1."""
        if not self.theory.ring.graded:
            return True
        for r, row in enumerate(m.entries):
            for k, x in enumerate(row):
                if x and not x.is_homogeneous(self.cells[k].dim - 1 - self.cells[r].dim):
                    return False
        return True


class BordismClass:
    __slots__ = ("space", "vector")

    def __init__(self, space: CellSpace, vector: Sequence[Poly]):
        if len(vector) != len(space.cells):
            raise ValueError("vector length does not match the cell count")
        self.space = space
        self.vector = list(vector)

    def _check(self, other):
        if not isinstance(other, BordismClass) or other.space != self.space:
            raise DomainMismatchError("classes live on different spaces")

    def __add__(self, other):
        self._check(other)
        red = self.space.theory.ring.reduce
        return BordismClass(self.space, [red(a + b) for a, b in zip(self.vector, other.vector)])

    def __sub__(self, other):
        self._check(other)
        red = self.space.theory.ring.reduce
        return BordismClass(self.space, [red(a - b) for a, b in zip(self.vector, other.vector)])

    def scale(self, c) -> BordismClass:
        c = self.space.theory.ring.polys(c)
        red = self.space.theory.ring.reduce
        return BordismClass(self.space, [red(a * c) for a in self.vector])

    def __eq__(self, other):
        if not isinstance(other, BordismClass):
            return NotImplemented
        return self.space == other.space and self.vector == other.vector

    def __hash__(self):
        return hash(tuple(self.vector))

    def is_zero(self) -> bool:
        return not any(self.vector)

    def __getitem__(self, cell_id: str) -> Poly:
        return self.vector[self.space.index[cell_id]]

    @property
    def degree(self) -> int | None:
        """Total degree (cell dimension + ring degree), if homogeneous."""
        if not self.space.theory.ring.graded:
            return None
        degs = set()
        for cell, c in zip(self.space.cells, self.vector):
            for d in c.homogeneous_parts():
                degs.add(cell.dim + d)
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return not self.space.theory.ring.graded or self.degree is not None or self.is_zero()

    def to_json(self) -> dict:
        return {cell.id: str(c) for cell, c in zip(self.space.cells, self.vector) if c}

    def __str__(self):
        out = []
        for cell, c in zip(self.space.cells, self.vector):
            if not c:
                continue
            text = str(c)
            neg = len(c.terms) == 1 and text.startswith("-")
            if neg:
                text = text[1:]
            if len(c.terms) > 1:
                text = f"({text})*"
            else:
                text = "" if text == "1" else f"{text}*"
            sign = ("-" if neg else "") if not out else (" - " if neg else " + ")
            out.append(f"{sign}{text}[{cell.id}]")
        return "".join(out) or "0"

    def __repr__(self):
        return f"BordismClass({self.space.name}: {self})"


# --- constructions -----------------------------------------------------


def projective_space(n: int, theory: OrientedTheory) -> CellSpace:
    """``P^n`` with cells ``h0..hn``; ``hk`` is a codimension-k linear subspace."""
    if n < 0:
        raise ValueError("n must be non-negative")
    theory.require_order(n)
    cells = [Cell(f"h{k}", n - k, (("O(1)", k),) if k else ()) for k in range(n + 1)]
    space = _PnSpace(theory, f"P{n}", n, cells, ("pn", n))
    shift = [[int(i == j + 1) for j in range(n + 1)] for i in range(n + 1)]
    space.register_bundle("O(1)", Matrix.from_ints(space, space, shift), generator=True)
    return space


class _PnSpace(CellSpace):
    def _derive(self, symbol):
        m = _O_PATTERN.fullmatch(symbol)
        if m:
            k = int(m.group(1))
            if k == 0:
                return Matrix.zero(self, self)
            return eval_series(self.theory.law.n_series(k), [self.c1("O(1)")])
        return super()._derive(symbol)


class _ProductSpace(CellSpace):
    def __init__(self, theory, x: CellSpace, y: CellSpace):
        cells = [
            Cell(
                f"{a.id}|{b.id}",
                a.dim + b.dim,
                tuple((f"p1*{s}", e) for s, e in a.word) + tuple((f"p2*{s}", e) for s, e in b.word),
            )
            for a in x.cells
            for b in y.cells
        ]
        super().__init__(theory, f"{x.name}x{y.name}", x.dim + y.dim, cells, ("product", x.recipe, y.recipe))
        self.factors = (x, y)
        for s in x.generators:
            self.register_bundle(f"p1*{s}", self._pull(1, s), generator=True)
        for s in y.generators:
            self.register_bundle(f"p2*{s}", self._pull(2, s), generator=True)

    def _pull(self, which: int, symbol: str) -> Matrix:
        x, y = self.factors
        if which == 1:
            return kron(x.c1(symbol), Matrix.identity(y), self, self)
        return kron(Matrix.identity(x), y.c1(symbol), self, self)

    def _derive(self, symbol):
        for which in (1, 2):
            prefix = f"p{which}*"
            if symbol.startswith(prefix) and "⊗" not in symbol:
                inner = symbol[len(prefix):]
                if self.factors[which - 1].has_bundle(inner):
                    return self._pull(which, inner)
        m = re.fullmatch(r"O\((-?\d+),(-?\d+)\)", symbol.replace(" ", ""))
        if m and all(isinstance(f, _PnSpace) for f in self.factors):
            a, b = m.groups()
            return self.tensor_matrix(self.c1(f"p1*O({a})"), self.c1(f"p2*O({b})"))
        return super()._derive(symbol)


def product(x: CellSpace, y: CellSpace) -> CellSpace:
    if x.theory is not y.theory:
        raise TheoryMismatchError("factors belong to different theories")
    x.theory.require_order(x.dim + y.dim)
    return _ProductSpace(x.theory, x, y)


@dataclass(frozen=True)
class SplitBundle:
    """Direct sum of registered line bundles on ``base``."""

    base: CellSpace
    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        for s in self.symbols:
            self.base.c1(s)

    @property
    def rank(self) -> int:
        return len(self.symbols)

    def c1s(self) -> list[Matrix]:
        return [self.base.c1(s) for s in self.symbols]


def elementary_symmetric(mats: Sequence[Matrix], space: CellSpace) -> list[Matrix]:
    """``[e_0, ..., e_r]`` of commuting matrices, via prod (1 + t*x_i)."""
    es = [Matrix.identity(space)]
    for m in mats:
        new = [es[0]]
        for k in range(1, len(es)):
            new.append(es[k] + m @ es[k - 1])
        new.append(m @ es[-1])
        es = new
    return es


def chern_class(bundle: SplitBundle, i: int) -> Matrix:
    if not 0 <= i <= bundle.rank:
        raise OutOfRangeError(f"Chern class index {i} outside 0..{bundle.rank}")
    if i == 0:
        return Matrix.identity(bundle.base)
    return elementary_symmetric(bundle.c1s(), bundle.base)[i]


def euler_class(bundle: SplitBundle) -> Matrix:
    """Iterated zero-section self-intersection ``c1(L_1) o ... o c1(L_r)``."""
    if bundle.rank < 1:
        raise OutOfRangeError("the Euler class needs rank >= 1")
    m = Matrix.identity(bundle.base)
    for s in bundle.symbols:
        m = bundle.base.c1(s) @ m
    return m


class _BundleSpace(CellSpace):
    def __init__(self, theory, bundle: SplitBundle):
        base = bundle.base
        e = bundle.rank - 1
        cells = []
        for j in range(e + 1):
            for b in base.cells:
                word = ((("xi", j),) if j else ()) + tuple((f"q*{s}", x) for s, x in b.word)
                cells.append(Cell(f"xi{j}|{b.id}", b.dim + e - j, word))
        super().__init__(
            theory, f"P({'+'.join(bundle.symbols)})/{base.name}", base.dim + e, cells,
            ("pbundle", base.recipe, bundle.symbols),
        )
        self.bundle = bundle
        self.base = base
        nb = len(base.cells)
        polys = theory.ring.polys
        zero = polys.zero
        # xi: (j, b) -> (j+1, b); top block rewritten with the Chern relation
        rows = [[zero] * len(cells) for _ in cells]
        for j in range(e):
            for k in range(nb):
                rows[(j + 1) * nb + k][j * nb + k] = polys.one
        chern = elementary_symmetric(bundle.c1s(), base)
        r = bundle.rank
        for i in range(1, r + 1):
            sign = 1 if i % 2 else -1
            block = chern[i].entries
            j = r - i
            for k2 in range(nb):
                for k in range(nb):
                    x = block[k2][k]
                    if x:
                        rows[j * nb + k2][e * nb + k] = theory.ring.reduce(x.scale(sign))
        self.register_bundle("xi", Matrix(theory, self, self, rows), generator=True)
        for s in base.generators:
            self.register_bundle(f"q*{s}", self._pull(s), generator=True)

    def _pull(self, symbol):
        e = self.bundle.rank - 1
        ident = Matrix.identity(projective_space(e, self.theory)) if e else None
        m = self.base.c1(symbol)
        if ident is None:
            return Matrix(self.theory, self, self, [list(r) for r in m.entries])
        return kron(ident, m, self, self)

    def _derive(self, symbol):
        if symbol.startswith("q*") and "⊗" not in symbol and self.base.has_bundle(symbol[2:]):
            return self._pull(symbol[2:])
        if symbol == "O(1)":
            return self.c1("xi")
        return super()._derive(symbol)


def projective_bundle(bundle: SplitBundle) -> CellSpace:
    if bundle.rank < 1:
        raise OutOfRangeError("projective bundle of a rank-0 bundle")
    theory = bundle.base.theory
    theory.require_order(bundle.base.dim + bundle.rank - 1)
    return _BundleSpace(theory, bundle)


def build_space(recipe, theory: OrientedTheory) -> CellSpace:
    """Rebuild a space from its recipe, possibly over another theory."""
    kind = recipe[0]
    if kind == "pn":
        return projective_space(recipe[1], theory)
    if kind == "product":
        return product(build_space(recipe[1], theory), build_space(recipe[2], theory))
    if kind == "pbundle":
        base = build_space(recipe[1], theory)
        return projective_bundle(SplitBundle(base, recipe[2]))
    raise ValueError(f"unknown recipe {recipe!r}")


# --- operations on classes ----------------------------------------------


def c1_apply(cls: BordismClass, symbol: str) -> BordismClass:
    return cls.space.c1(symbol)(cls)


def intersection_product(a: BordismClass, b: BordismClass) -> BordismClass:
    """Product in the operator presentation: ``P_a(c1's)`` applied to ``b``."""
    a._check(b)
    return a.space.operator_of(a)(b)


def external_product(a: BordismClass, b: BordismClass, space: CellSpace | None = None) -> BordismClass:
    if space is None:
        space = product(a.space, b.space)
    elif space.recipe != ("product", a.space.recipe, b.space.recipe):
        raise DomainMismatchError("target is not the product of the factor spaces")
    red = space.theory.ring.reduce
    return BordismClass(space, [red(x * y) for x in a.vector for y in b.vector])


def hypersurface_class(n: int, d: int, theory: OrientedTheory) -> BordismClass:
    """Class of a degree-d hypersurface: ``[d]_F(c1(O(1)))`` applied to ``1``."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    pn = projective_space(n, theory)
    op = eval_series(theory.law.n_series(d), [pn.c1("O(1)")])
    return op(pn.unit())


def projective_space_class(m: int, theory: OrientedTheory) -> Poly:
    """``[P^m]`` in the coefficient ring, read off the logarithm."""
    if not theory.is_rational:
        raise DomainMismatchError("push-forward to a point needs a QQ-algebra theory")
    theory.require_order(m + 1)
    c = theory.law.log.coefficient((m + 1,))
    return theory.elem(c.scale(m + 1))


def pushforward_to_point(cls: BordismClass) -> Poly:
    """Degree map; supported on projective spaces and their products."""
    theory = cls.space.theory
    if not theory.is_rational:
        raise DomainMismatchError("push-forward to a point needs a QQ-algebra theory")
    images = _point_images(cls.space)
    acc = theory.ring.polys.zero
    for c, img in zip(cls.vector, images):
        if c:
            acc = acc + c * img
    return theory.ring.reduce(acc)


def _point_images(space: CellSpace) -> list[Poly]:
    theory = space.theory
    kind = space.recipe[0]
    if kind == "pn":
        n = space.dim
        return [projective_space_class(n - k, theory) for k in range(n + 1)]
    if kind == "product":
        x, y = space.factors
        return [theory.elem(a * b) for a in _point_images(x) for b in _point_images(y)]
    raise UnsupportedClassError(f"push-forward to a point is not available on {space.name}")


# --- maps ------------------------------------------------------------------


class Map:
    """A morphism between model spaces with the matrices it induces.

    ``push`` is present for proper maps, ``pull`` for smooth ones;
    ``bundles`` maps a line bundle symbol on the target to the symbol of
    its pull-back on the source.
    """

    def __init__(self, name, source, target, push=None, pull=None, bundles=None, rel_dim=None):
        self.name = name
        self.source = source
        self.target = target
        self.push_matrix = push
        self.pull_matrix = pull
        self.bundles = dict(bundles or {})
        self.rel_dim = rel_dim

    def __repr__(self):
        return f"Map({self.name}: {self.source.name} -> {self.target.name})"

    @property
    def proper(self) -> bool:
        return self.push_matrix is not None

    @property
    def smooth(self) -> bool:
        return self.pull_matrix is not None

    def pulled_back_symbol(self, symbol: str) -> str:
        if symbol in self.bundles:
            return self.bundles[symbol]
        raise UnknownBundleError(f"pull-back of {symbol!r} along {self.name} is not registered")


def push_forward(f: Map, cls: BordismClass) -> BordismClass:
    if f.push_matrix is None:
        raise UnregisteredMapError(f"{f.name} has no registered push-forward")
    if cls.space != f.source:
        raise DomainMismatchError("class is not on the source of the map")
    return f.push_matrix(cls)


def pull_back(f: Map, cls: BordismClass) -> BordismClass:
    if f.pull_matrix is None:
        raise UnregisteredMapError(f"{f.name} has no registered pull-back")
    if cls.space != f.target:
        raise DomainMismatchError("class is not on the target of the map")
    return f.pull_matrix(cls)


def identity_map(x: CellSpace) -> Map:
    ident = Matrix.identity(x)
    return Map(f"id_{x.name}", x, x, ident, ident, {s: s for s in x.bundles}, 0)


def linear_embedding(pk: CellSpace, pn: CellSpace) -> Map:
    """``P^k`` as a linear subspace of ``P^n``; ``O(m)`` restricts to ``O(m)``."""
    if pk.recipe[0] != "pn" or pn.recipe[0] != "pn" or pk.dim > pn.dim:
        raise UnregisteredMapError("linear embeddings go between projective spaces P^k -> P^n, k <= n")
    if pk.theory is not pn.theory:
        raise TheoryMismatchError("spaces belong to different theories")
    k, n = pk.dim, pn.dim
    push = [[int(i == j + n - k) for j in range(k + 1)] for i in range(n + 1)]
    bundles = {f"O({m})": f"O({m})" for m in range(-3, 4)}
    return Map(f"P{k}->P{n}", pk, pn, push=Matrix.from_ints(pn, pk, push), bundles=bundles)


def point_inclusion(pn: CellSpace) -> Map:
    return linear_embedding(projective_space(0, pn.theory), pn)


def structure_map(x: CellSpace) -> Map:
    """``X -> pt``: pull-back always; push-forward over QQ-algebras."""
    pt = projective_space(0, x.theory)
    pull = Matrix(x.theory, x, pt, [[c] for c in x.unit().vector])
    push = None
    if x.theory.is_rational:
        try:
            push = Matrix(x.theory, pt, x, [_point_images(x)])
        except UnsupportedClassError:
            push = None
    return Map(f"{x.name}->pt", x, pt, push=push, pull=pull, bundles={}, rel_dim=x.dim)


def projection(xy: CellSpace, which: int = 1) -> Map:
    """Projection of a product onto its first or second factor."""
    if not isinstance(xy, _ProductSpace):
        raise UnregisteredMapError(f"{xy.name} is not a product")
    x, y = xy.factors
    target, other = (x, y) if which == 1 else (y, x)
    # pull-back: alpha -> alpha x 1_other
    one = other.unit().vector
    polys = xy.theory.ring.polys
    rows = [[polys.zero] * len(target.cells) for _ in xy.cells]
    nb = len(y.cells)
    for i, a in enumerate(x.cells):
        for j, b in enumerate(y.cells):
            r = i * nb + j
            if which == 1 and one[j]:
                rows[r][i] = one[j]
            if which == 2 and one[i]:
                rows[r][j] = one[i]
    pull = Matrix(xy.theory, xy, target, rows)
    push = None
    if xy.theory.is_rational:
        try:
            degs = _point_images(other)
        except UnsupportedClassError:
            degs = None
        if degs is not None:
            prow = [[polys.zero] * len(xy.cells) for _ in target.cells]
            for i in range(len(x.cells)):
                for j in range(nb):
                    if which == 1:
                        prow[i][i * nb + j] = degs[j]
                    else:
                        prow[j][i * nb + j] = degs[i]
            push = Matrix(xy.theory, target, xy, prow)
    bundles = {s: f"p{which}*{s}" for s in target.bundles}
    return Map(f"p{which}:{xy.name}", xy, target, push=push, pull=pull, bundles=bundles, rel_dim=other.dim)


def product_map(f: Map, g: Map, source: CellSpace | None = None, target: CellSpace | None = None) -> Map:
    source = source or product(f.source, g.source)
    target = target or product(f.target, g.target)
    push = kron(f.push_matrix, g.push_matrix, target, source) if f.proper and g.proper else None
    pull = kron(f.pull_matrix, g.pull_matrix, source, target) if f.smooth and g.smooth else None
    bundles = {f"p1*{a}": f"p1*{b}" for a, b in f.bundles.items()}
    bundles.update({f"p2*{a}": f"p2*{b}" for a, b in g.bundles.items()})
    rel = None if f.rel_dim is None or g.rel_dim is None else f.rel_dim + g.rel_dim
    return Map(f"{f.name}x{g.name}", source, target, push=push, pull=pull, bundles=bundles, rel_dim=rel)


def compose(f: Map, g: Map) -> Map:
    """``g o f``."""
    if f.target != g.source:
        raise DomainMismatchError("maps do not compose")
    push = g.push_matrix @ f.push_matrix if f.proper and g.proper else None
    pull = f.pull_matrix @ g.pull_matrix if f.smooth and g.smooth else None
    bundles = {a: f.bundles[b] for a, b in g.bundles.items() if b in f.bundles}
    rel = None if f.rel_dim is None or g.rel_dim is None else f.rel_dim + g.rel_dim
    return Map(f"{g.name}o{f.name}", f.source, g.target, push=push, pull=pull, bundles=bundles, rel_dim=rel)


def bundle_projection(pe: CellSpace) -> Map:
    """``q: P(E) -> X``; pull-back only (no push-forward along q)."""
    if not isinstance(pe, _BundleSpace):
        raise UnregisteredMapError(f"{pe.name} is not a projective bundle")
    base = pe.base
    polys = pe.theory.ring.polys
    rows = [[polys.zero] * len(base.cells) for _ in pe.cells]
    for k in range(len(base.cells)):
        rows[k][k] = polys.one
    pull = Matrix(pe.theory, pe, base, rows)
    bundles = {s: f"q*{s}" for s in base.bundles}
    return Map(f"q:{pe.name}", pe, base, pull=pull, bundles=bundles, rel_dim=pe.bundle.rank - 1)


def specialize(cls: BordismClass, theta, target: OrientedTheory | None = None) -> BordismClass:
    """Apply a coefficient ring map cellwise, landing on the rebuilt space."""
    source = cls.space.theory
    if target is None:
        target = OrientedTheory(theta.apply_law(source.law), name=f"{source.name}->image")
    if theta.target != target.ring and theta.target is not target.ring:
        raise DomainMismatchError("ring map does not land in the target theory's ring")
    if theta.source != source.ring and theta.source is not source.ring:
        raise DomainMismatchError("ring map does not start at the class's ring")
    space = build_space(cls.space.recipe, target)
    return BordismClass(space, [theta.apply(c) for c in cls.vector])


def specialize_matrix(m: Matrix, theta, codomain: CellSpace, domain: CellSpace) -> Matrix:
    return m.map_entries(theta.apply, codomain.theory, codomain, domain)


def check_dim_axiom(space: CellSpace, symbols: Sequence[str] | None = None) -> bool:
    """Every composite of more than ``dim`` first Chern classes vanishes."""
    symbols = list(symbols or space.generators)
    mats = [space.c1(s) for s in symbols]
    target = space.dim + 1

    # words are multisets since the operators commute; share prefixes
    def rec(start, prefix, length):
        if prefix.is_zero():
            return True
        if length == target:
            return False
        return all(rec(k, mats[k] @ prefix, length + 1) for k in range(start, len(mats)))

    return rec(0, Matrix.identity(space), 0)


def check_commuting(space: CellSpace, symbols: Sequence[str] | None = None) -> bool:
    symbols = list(symbols or space.bundles)
    mats = [space.c1(s) for s in symbols]
    return all(a @ b == b @ a for a, b in combinations(mats, 2))


__all__ = [
    "BordismClass",
    "Cell",
    "CellSpace",
    "Map",
    "Matrix",
    "OrientedTheory",
    "SplitBundle",
]
