"""Truncated multivariate power series over a graded coefficient ring.

A series keeps every term of total formal degree ``<= order``.  The
coefficient ring is any object with the small protocol shared by
:class:`~cobcalc.exactalg.PolyRing` and the Lazard quotient ring:
``polys`` (the ambient polynomial ring), ``reduce`` (normal form),
``is_rational`` and ``graded``.  Coefficients are always stored reduced.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, Mapping, Sequence

from .errors import CompositionError, DomainMismatchError, OutOfRangeError, SolveError
from .exactalg.poly import MAX_EXPONENT, Poly, PolyRing, ZZ


class TruncatedSeries:
    __slots__ = ("ring", "names", "order", "terms")

    def __init__(self, ring, names: Sequence[str], order: int, terms: Mapping[tuple, Poly] | None = None):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.ring = ring
        self.names = tuple(names)
        self.order = order
        n = len(self.names)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError("exponent vector has wrong length")
            if sum(exps) > order:
                continue
            if not isinstance(c, Poly):
                c = ring.polys.const(c)
            if c:
                clean[exps] = c
        self.terms = clean

    # --- constructors ------------------------------------------------
    @classmethod
    def _raw(cls, ring, names, order, terms):
        s = cls.__new__(cls)
        s.ring, s.names, s.order, s.terms = ring, names, order, terms
        return s

    @classmethod
    def zero(cls, ring, names, order):
        return cls._raw(ring, tuple(names), order, {})

    @classmethod
    def constant(cls, ring, names, order, c):
        names = tuple(names)
        return cls(ring, names, order, {(0,) * len(names): ring.reduce(ring.polys(c))})

    @classmethod
    def variable(cls, ring, names, order, name):
        names = tuple(names)
        if name not in names:
            raise DomainMismatchError(f"unknown formal variable {name!r}")
        exps = tuple(int(n == name) for n in names)
        return cls(ring, names, order, {exps: ring.polys.one})

    @classmethod
    def from_terms(cls, ring, names, order, terms: Mapping[tuple, object]):
        names = tuple(names)
        red = {}
        for exps, c in terms.items():
            red[tuple(exps)] = ring.reduce(ring.polys(c))
        return cls(ring, names, order, red)

    def like(self, terms, order=None):
        return TruncatedSeries(self.ring, self.names, self.order if order is None else order, terms)

    # --- inspection ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.names)

    def coefficient(self, exps: Sequence[int] | Mapping[str, int]) -> Poly:
        if isinstance(exps, Mapping):
            exps = tuple(exps.get(n, 0) for n in self.names)
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        if sum(exps) > self.order:
            raise OutOfRangeError(f"exponent {exps} exceeds truncation order {self.order}")
        return self.terms.get(exps, self.ring.polys.zero)

    def __getitem__(self, exps):
        if isinstance(exps, int):
            exps = (exps,)
        return self.coefficient(exps)

    def constant_term(self) -> Poly:
        return self.terms.get((0,) * self.nvars, self.ring.polys.zero)

    def min_degree(self) -> int:
        """Lowest total degree of a nonzero term (order + 1 if zero)."""
        return min((sum(e) for e in self.terms), default=self.order + 1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))

    # --- compatibility --------------------------------------------------
    def _check(self, other: TruncatedSeries):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if self.names != other.names:
            raise DomainMismatchError(f"formal variables {self.names} vs {other.names}")
        if self.ring is not other.ring and self.ring != other.ring:
            raise DomainMismatchError("series over different coefficient rings")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Poly)) and not isinstance(other, bool):
            return TruncatedSeries.constant(self.ring, self.names, self.order, other)
        return NotImplemented

    # --- arithmetic -----------------------------------------------------
    def _linear(self, other, sign):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        out = {e: c for e, c in self.terms.items() if sum(e) <= order}
        red = self.ring.reduce
        for e, c in other.terms.items():
            if sum(e) > order:
                continue
            cur = out.get(e)
            if cur is None:
                out[e] = c if sign > 0 else red(-c)
            else:
                out[e] = red(cur + c if sign > 0 else cur - c)
        return TruncatedSeries._raw(self.ring, self.names, order, {e: c for e, c in out.items() if c})

    def __add__(self, other):
        return self._linear(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._linear(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        red = self.ring.reduce
        return TruncatedSeries._raw(self.ring, self.names, self.order, {e: red(-c) for e, c in self.terms.items()})

    def scale(self, c) -> TruncatedSeries:
        """Multiply every coefficient by a ring element or scalar."""
        if not isinstance(c, Poly):
            c = self.ring.polys.const(c)
        red = self.ring.reduce
        if c.is_constant:
            k = c.constant_term
            out = {e: red(v.scale(k)) for e, v in self.terms.items()} if k else {}
        else:
            out = {e: red(v * c) for e, v in self.terms.items()}
        return TruncatedSeries._raw(self.ring, self.names, self.order, {e: v for e, v in out.items() if v})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        by_deg_b: dict[int, list] = {}
        for e, c in other.terms.items():
            d = sum(e)
            if d <= order:
                by_deg_b.setdefault(d, []).append((e, c.terms, c.max_exponent()))
        acc: dict[tuple, dict] = {}
        for ea, ca in self.terms.items():
            da = sum(ea)
            ta = ca.terms
            ma = ca.max_exponent()
            for db in range(0, order - da + 1):
                for eb, tb, mb in by_deg_b.get(db, ()):
                    if ma + mb > MAX_EXPONENT:
                        raise OverflowError("exponent overflow in series product")
                    key = tuple(x + y for x, y in zip(ea, eb))
                    target = acc.get(key)
                    if target is None:
                        target = acc[key] = {}
                    get = target.get
                    for m1, c1 in ta.items():
                        for m2, c2 in tb.items():
                            m = m1 + m2
                            target[m] = get(m, 0) + c1 * c2
        polys = self.ring.polys
        red = self.ring.reduce
        out = {}
        for e, t in acc.items():
            p = red(Poly(polys, t))
            if p:
                out[e] = p
        return TruncatedSeries._raw(self.ring, self.names, order, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power; use inverse()")
        result = TruncatedSeries.constant(self.ring, self.names, self.order, 1)
        for _ in range(n):
            result = result * self
        return result

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise OutOfRangeError(f"cannot raise truncation order {self.order} to {order}")
        return TruncatedSeries._raw(
            self.ring, self.names, order, {e: c for e, c in self.terms.items() if sum(e) <= order}
        )

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.names == other.names
            and self.order == other.order
            and (self.ring is other.ring or self.ring == other.ring)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.names, self.order, frozenset(self.terms.items())))

    def agrees_with(self, other: TruncatedSeries, order: int | None = None) -> bool:
        """Equality modulo terms above ``order`` (default: common order)."""
        self._check(other)
        n = min(self.order, other.order) if order is None else order
        return self.truncate(n).terms == other.truncate(n).terms

    # --- calculus -------------------------------------------------------
    def derivative(self, name: str) -> TruncatedSeries:
        i = self.names.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = self.ring.reduce(c.scale(e[i]))
        return TruncatedSeries(self.ring, self.names, max(self.order - 1, 0), out)

    def integrate(self, name: str) -> TruncatedSeries:
        """Termwise antiderivative with zero constant; needs a QQ-algebra."""
        if not self.ring.is_rational:
            raise DomainMismatchError("termwise integration needs rational coefficients")
        i = self.names.index(name)
        out = {}
        for e, c in self.terms.items():
            ne = e[:i] + (e[i] + 1,) + e[i + 1:]
            out[ne] = c.scale(Fraction(1, e[i] + 1))
        return TruncatedSeries(self.ring, self.names, self.order + 1, out)

    def inverse(self) -> TruncatedSeries:
        """Multiplicative inverse; the constant term must be a unit scalar."""
        c0 = self.constant_term()
        if not c0.is_constant or not c0:
            raise SolveError("constant term is not a unit")
        k = c0.constant_term
        if self.ring.polys.domain == ZZ and k not in (1, -1):
            raise SolveError(f"constant term {k} is not a unit in ZZ")
        inv_k = k if self.ring.polys.domain == ZZ else 1 / Fraction(k)
        # 1/(k(1+r)) = k^{-1} * sum (-r)^j
        r = (self.scale(inv_k) - 1)
        neg_r = -r
        total = TruncatedSeries.constant(self.ring, self.names, self.order, 1)
        term = total
        for _ in range(self.order):
            term = term * neg_r
            if term.is_zero():
                break
            total = total + term
        return total.scale(inv_k)

    # --- composition ----------------------------------------------------
    def substitute(self, assignments: Mapping[str, TruncatedSeries]) -> TruncatedSeries:
        """Compose: replace each formal variable by a series.

        Every variable of ``self`` must be assigned, all assigned series
        share variables and ring, and none may have a constant term.
        """
        return substitute(self, assignments)

    def embed(self, names: Sequence[str], rename: Mapping[str, str] | None = None) -> TruncatedSeries:
        """View as a series in the larger variable list ``names``."""
        rename = rename or {}
        names = tuple(names)
        pos = []
        for n in self.names:
            target = rename.get(n, n)
            if target not in names:
                raise DomainMismatchError(f"no target variable for {n!r}")
            pos.append(names.index(target))
        if len(set(pos)) != len(pos):
            raise DomainMismatchError("rename is not injective")
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(names)
            for p, x in zip(pos, e):
                ne[p] = x
            out[tuple(ne)] = c
        return TruncatedSeries._raw(self.ring, names, self.order, out)

    def map_coefficients(self, fn: Callable[[Poly], Poly], ring) -> TruncatedSeries:
        out = {}
        for e, c in self.terms.items():
            v = ring.reduce(fn(c))
            if v:
                out[e] = v
        return TruncatedSeries._raw(ring, self.names, self.order, out)

    # --- output ---------------------------------------------------------
    def monomial_str(self, exps) -> str:
        parts = []
        for n, e in zip(self.names, exps):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_items():
            mono = self.monomial_str(e)
            text = str(c)
            single = len(c.terms) == 1
            neg = single and text.startswith("-")
            if neg:
                text = text[1:]
            if mono:
                if text == "1":
                    body = mono
                elif single:
                    body = f"{text}*{mono}"
                else:
                    body = f"({text})*{mono}"
            else:
                body = text if single else f"({text})"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"TruncatedSeries({self} + O({self.order + 1}))"

    def to_json(self) -> dict:
        return {
            "formal_vars": list(self.names),
            "order": self.order,
            "terms": [{"exps": list(e), "coeff": c.to_json()} for e, c in self.sorted_items()],
        }

    @classmethod
    def from_json(cls, data: Mapping, ring=None) -> TruncatedSeries:
        """Inverse of :meth:`to_json`; infers a polynomial ring if none given."""
        if ring is None:
            var_sets = {
                tuple((v["name"], int(v["degree"])) for v in t["coeff"].get("vars", []))
                for t in data["terms"]
            }
            if len(var_sets) > 1:
                raise DomainMismatchError("coefficients use different variable sets")
            rational = any("/" in str(x["coeff"]) for t in data["terms"] for x in t["coeff"]["terms"])
            ring = PolyRing(var_sets.pop() if var_sets else (), "QQ" if rational else ZZ)
        terms = {tuple(int(e) for e in t["exps"]): ring.polys.from_json(t["coeff"]) for t in data["terms"]}
        return cls.from_terms(ring, data["formal_vars"], int(data["order"]), terms)


def series_arith(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def substitute(f: TruncatedSeries, assignments: Mapping[str, TruncatedSeries]) -> TruncatedSeries:
    missing = [n for n in f.names if n not in assignments]
    if missing:
        raise DomainMismatchError(f"no assignment for {missing}")
    gs = [assignments[n] for n in f.names]
    if not gs:
        raise DomainMismatchError("nothing to substitute")
    g0 = gs[0]
    for g in gs:
        g0._check(g)
        if g.ring is not f.ring and g.ring != f.ring:
            raise DomainMismatchError("substituted series live over a different ring")
        if g.constant_term():
            raise CompositionError("substituted series has a nonzero constant term")
    order = min([f.order] + [g.order for g in gs])
    ring, names = f.ring, g0.names
    gs = [g.truncate(order) for g in gs]
    one = TruncatedSeries.constant(ring, names, order, 1)
    powers: list[list[TruncatedSeries]] = [[one] for _ in gs]

    def power(i, e):
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] * gs[i])
        return cache[e]

    k = len(gs)

    mindeg = [g.min_degree() for g in gs]

    # budget: the formal order to which the partial result is needed;
    # a factor power(idx, x) has no terms below x * mindeg[idx]
    def rec(terms: dict, idx: int, budget: int) -> TruncatedSeries:
        groups: dict[int, dict] = {}
        for e, c in terms.items():
            groups.setdefault(e[idx], {})[e] = c
        total = TruncatedSeries.zero(ring, names, budget)
        for x, sub in sorted(groups.items()):
            low = x * mindeg[idx]
            if low > budget:
                continue
            outer = power(idx, x)
            if outer.order > budget:
                outer = outer.truncate(budget)
            if idx == k - 1:
                (c,) = sub.values()
                piece = outer.scale(c)
            else:
                inner = rec(sub, idx + 1, budget - low)
                if inner.is_zero():
                    continue
                if x:
                    inner = TruncatedSeries._raw(ring, names, budget, inner.terms)
                    piece = outer * inner
                else:
                    piece = inner
            total = total + piece
        return total

    if not f.terms:
        return TruncatedSeries.zero(ring, names, order)
    return rec(f.terms, 0, order)


def solve_implicit(
    equation: Callable[[TruncatedSeries], TruncatedSeries],
    seed: TruncatedSeries,
    order: int,
) -> TruncatedSeries:
    """Find the one-variable series ``g`` with ``equation(g) == 0``.

    ``g`` agrees with ``seed`` up to the seed's top degree; each higher
    coefficient is determined from the coefficient of the equation in
    the same degree, which must be affine in the unknown with a unit
    constant slope.  Raises :class:`SolveError` otherwise.
    """
    if seed.nvars != 1:
        raise ValueError("solve_implicit handles one-variable unknowns")
    ring, names = seed.ring, seed.names
    start = max((e[0] for e in seed.terms), default=0)
    if start > order:
        raise OutOfRangeError("seed exceeds requested order")
    g = TruncatedSeries(ring, names, order, seed.terms)

    def residual(series, k):
        out = equation(series.truncate(k))
        if out.names != names:
            raise SolveError("equation must return a series in the unknown's variable")
        return out

    check = residual(g, start)
    if not check.is_zero():
        raise SolveError(f"seed does not satisfy the equation up to degree {start}")
    domain = ring.polys.domain
    for k in range(start + 1, order + 1):
        e0 = residual(g, k).coefficient((k,))
        bumped = g + TruncatedSeries(ring, names, order, {(k,): ring.polys.one})
        e1 = residual(bumped, k).coefficient((k,))
        slope = ring.reduce(e1 - e0)
        if slope.is_zero:
            raise SolveError(f"degree {k} coefficient is not determined")
        if not slope.is_constant:
            raise SolveError(f"degree {k} step has non-scalar slope {slope}")
        s = slope.constant_term
        try:
            ck = ring.reduce((-e0).exact_div(s))
        except ArithmeticError as exc:
            raise SolveError(f"degree {k} step is not solvable over {domain}") from exc
        if ck:
            g = g + TruncatedSeries(ring, names, order, {(k,): ck})
    if not residual(g, order).is_zero():
        raise SolveError("solution does not satisfy the equation")
    return g


def monomials(nvars: int, order: int) -> Iterable[tuple[int, ...]]:
    """All exponent vectors of total degree <= order, by degree."""
    for d in range(order + 1):
        for e in iproduct(range(d + 1), repeat=nvars):
            if sum(e) == d:
                yield e
