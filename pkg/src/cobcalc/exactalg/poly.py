"""Sparse graded multivariate polynomials over ZZ or QQ.

Monomials are packed into a single Python int, ``_BITS`` bits per
variable, so that multiplying monomials is integer addition.  A
:class:`PolyRing` fixes the variable universe (names and gradings) and
the coefficient domain; :class:`Poly` values are immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import CobcalcError, DomainMismatchError

_BITS = 16
_MASK = (1 << _BITS) - 1
MAX_EXPONENT = _MASK

ZZ = "ZZ"
QQ = "QQ"


@dataclass(frozen=True)
class Variable:
    name: str
    degree: int = 1


def _coerce(c, domain):
    if domain == ZZ:
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise DomainMismatchError(f"non-integral coefficient {c} in ZZ")
            return int(c.numerator)
        if isinstance(c, bool) or not isinstance(c, int):
            raise DomainMismatchError(f"bad ZZ coefficient {c!r}")
        return c
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        return Fraction(c)
    raise DomainMismatchError(f"bad QQ coefficient {c!r}")


def format_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)


def parse_coeff(text: str, domain):
    text = text.strip()
    if domain == ZZ:
        if "/" in text:
            return _coerce(Fraction(text), ZZ)
        return int(text)
    return Fraction(text)


class PolyRing:
    """Polynomial ring ``domain[x1, ..., xk]`` with a positive grading.

    The ring is also the trivial quotient of itself: :meth:`reduce` is
    the identity.  Quotient rings (the Lazard ring) expose the same
    interface through a ``polys`` attribute and their own ``reduce``.
    """

    def __init__(self, variables: Iterable[Variable | tuple[str, int] | str] = (), domain: str = ZZ):
        vs = []
        for v in variables:
            if isinstance(v, str):
                v = Variable(v, 1)
            elif not isinstance(v, Variable):
                v = Variable(*v)
            vs.append(v)
        names = [v.name for v in vs]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for v in vs:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v.name):
                raise ValueError(f"bad variable name {v.name!r}")
            if v.degree < 0:
                raise ValueError("variable degrees must be non-negative")
        if domain not in (ZZ, QQ):
            raise ValueError(f"unknown domain {domain!r}")
        self.variables = tuple(vs)
        self.domain = domain
        self.index = {v.name: i for i, v in enumerate(vs)}
        self._degree_cache: dict[int, int] = {}
        self.zero = Poly(self, {})
        self.one = Poly(self, {0: self.coerce(1)})

    # ring-level protocol shared with quotient rings
    @property
    def polys(self) -> PolyRing:
        return self

    @property
    def is_rational(self) -> bool:
        return self.domain == QQ

    @property
    def graded(self) -> bool:
        return bool(self.variables)

    def reduce(self, p: Poly) -> Poly:
        return p

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.domain == other.domain
        )

    def __hash__(self):
        return hash((self.variables, self.domain))

    def __repr__(self):
        names = ", ".join(v.name for v in self.variables)
        return f"PolyRing({self.domain}[{names}])"

    def with_domain(self, domain: str) -> PolyRing:
        return PolyRing(self.variables, domain)

    # --- monomial packing -------------------------------------------------
    def pack(self, exps: Mapping[str, int] | Iterable[int]) -> int:
        m = 0
        if isinstance(exps, Mapping):
            for name, e in exps.items():
                if name not in self.index:
                    raise DomainMismatchError(f"unknown variable {name!r}")
                if not 0 <= e <= MAX_EXPONENT:
                    raise ValueError(f"exponent {e} out of range")
                m += e << (_BITS * self.index[name])
            return m
        exps = list(exps)
        if len(exps) != len(self.variables):
            raise ValueError("exponent vector has wrong length")
        for i, e in enumerate(exps):
            if not 0 <= e <= MAX_EXPONENT:
                raise ValueError(f"exponent {e} out of range")
            m += e << (_BITS * i)
        return m

    def unpack(self, m: int) -> tuple[int, ...]:
        return tuple((m >> (_BITS * i)) & _MASK for i in range(len(self.variables)))

    def monomial_degree(self, m: int) -> int:
        d = self._degree_cache.get(m)
        if d is None:
            d = sum(e * v.degree for e, v in zip(self.unpack(m), self.variables))
            self._degree_cache[m] = d
        return d

    def monomial_str(self, m: int) -> str:
        parts = []
        for e, v in zip(self.unpack(m), self.variables):
            if e == 1:
                parts.append(v.name)
            elif e > 1:
                parts.append(f"{v.name}^{e}")
        return "*".join(parts)

    # --- constructors ----------------------------------------------------
    def coerce(self, c):
        return _coerce(c, self.domain)

    def const(self, c) -> Poly:
        return Poly(self, {0: self.coerce(c)})

    def gen(self, name: str) -> Poly:
        return Poly(self, {self.pack({name: 1}): self.coerce(1)})

    def gens(self) -> list[Poly]:
        return [self.gen(v.name) for v in self.variables]

    def from_terms(self, terms: Iterable[tuple[object, Mapping[str, int]]]) -> Poly:
        out: dict[int, object] = {}
        for c, exps in terms:
            m = self.pack(exps)
            out[m] = out.get(m, 0) + self.coerce(c)
        return Poly(self, out)

    def __call__(self, x) -> Poly:
        if isinstance(x, Poly):
            if x.ring != self:
                raise DomainMismatchError(f"{x.ring!r} is not {self!r}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)

    # --- text and JSON ------------------------------------------------
    def parse(self, text: str) -> Poly:
        """Parse the output of ``str(Poly)`` back into a polynomial."""
        s = text.replace(" ", "")
        if not s:
            raise CobcalcError("empty polynomial string")
        if s[0] not in "+-":
            s = "+" + s
        out: dict[int, object] = {}
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            c = self.coerce(1)
            exps: dict[str, int] = {}
            for factor in body.split("*"):
                if not factor:
                    raise CobcalcError(f"cannot parse polynomial {text!r}")
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    c = c * parse_coeff(factor, QQ)
                    continue
                name, _, e = factor.partition("^")
                if name not in self.index:
                    raise CobcalcError(f"unknown variable {name!r} in {text!r}")
                exps[name] = exps.get(name, 0) + (int(e) if e else 1)
            if sign == "-":
                c = -c
            m = self.pack(exps)
            out[m] = out.get(m, 0) + self.coerce(c)
        if "".join(sign + body for sign, body in re.findall(r"([+-])([^+-]+)", s)) != s:
            raise CobcalcError(f"cannot parse polynomial {text!r}")
        return Poly(self, out)

    def vars_json(self) -> list[dict]:
        return [{"name": v.name, "degree": v.degree} for v in self.variables]

    @classmethod
    def from_vars_json(cls, data: list[dict], domain: str = ZZ) -> PolyRing:
        return cls([Variable(d["name"], int(d["degree"])) for d in data], domain)

    def from_json(self, data: Mapping) -> Poly:
        """Read the ``{"vars": ..., "terms": ...}`` form into this ring."""
        names = [d["name"] for d in data.get("vars", [])]
        for name in names:
            if name not in self.index:
                raise DomainMismatchError(f"unknown variable {name!r}")
        terms = []
        for t in data["terms"]:
            exps = {k: int(e) for k, e in t.get("exps", {}).items()}
            terms.append((parse_coeff(str(t["coeff"]), self.domain), exps))
        return self.from_terms(terms)


def poly_from_json(data: Mapping, domain: str | None = None) -> Poly:
    """Build a polynomial together with its ring from JSON."""
    if domain is None:
        domain = QQ if any("/" in str(t["coeff"]) for t in data["terms"]) else ZZ
    ring = PolyRing.from_vars_json(data.get("vars", []), domain)
    return ring.from_json(data)


class Poly:
    __slots__ = ("ring", "terms", "_maxexp", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[int, object]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._maxexp = None
        self._hash = None

    # --- inspection ------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    @property
    def constant_term(self):
        return self.terms.get(0, self.ring.coerce(0))

    def max_exponent(self) -> int:
        if self._maxexp is None:
            best = 0
            for m in self.terms:
                while m:
                    e = m & _MASK
                    if e > best:
                        best = e
                    m >>= _BITS
            self._maxexp = best
        return self._maxexp

    def degree(self) -> int:
        """Largest ring degree of a term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(self.ring.monomial_degree(m) for m in self.terms)

    def homogeneous_parts(self) -> dict[int, Poly]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.ring.monomial_degree(m), {})[m] = c
        return {d: Poly(self.ring, t) for d, t in sorted(parts.items())}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {self.ring.monomial_degree(m) for m in self.terms}
        if degree is None:
            return len(degs) <= 1
        return degs <= {degree}

    def sorted_terms(self) -> list[tuple[int, object]]:
        """Terms in graded-lexicographic order (lowest degree first)."""
        ring = self.ring

        def key(item):
            m = item[0]
            return (ring.monomial_degree(m), tuple(-e for e in ring.unpack(m)))

        return sorted(self.terms.items(), key=key)

    def coefficient(self, exps: Mapping[str, int]):
        return self.terms.get(self.ring.pack(exps), self.ring.coerce(0))

    # --- arithmetic --------------------------------------------------------
    def _check(self, other: Poly):
        if self.ring is not other.ring and self.ring != other.ring:
            if (
                isinstance(other.ring, PolyRing)
                and self.ring.variables == other.ring.variables
            ):
                raise DomainMismatchError(
                    f"mixed coefficient domains {self.ring.domain} and {other.ring.domain}"
                )
            raise DomainMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return Poly(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.max_exponent() + other.max_exponent() > MAX_EXPONENT:
            raise OverflowError("exponent overflow in polynomial product")
        out: dict[int, object] = {}
        get = out.get
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = ma + mb
                out[m] = get(m, 0) + ca * cb
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> Poly:
        c = self.ring.coerce(c)
        if not c:
            return self.ring.zero
        return Poly(self.ring, {m: v * c for m, v in self.terms.items()})

    def exact_div(self, c) -> Poly:
        """Divide every coefficient by the scalar ``c``; must be exact in ZZ."""
        if self.ring.domain == QQ:
            c = Fraction(c)
            return Poly(self.ring, {m: v / c for m, v in self.terms.items()})
        out = {}
        for m, v in self.terms.items():
            q, r = divmod(v, c)
            if r:
                raise ArithmeticError(f"{v} is not divisible by {c}")
            out[m] = q
        return Poly(self.ring, out)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # --- maps --------------------------------------------------------------
    def evaluate(self, images: Mapping[str, Poly], target: PolyRing) -> Poly:
        """Ring homomorphism sending each variable to ``images[name]``.

        Variables absent from ``images`` must not occur in ``self``.
        Coefficients are coerced into the target domain.
        """
        power_cache: dict[tuple[int, int], Poly] = {}

        def power(i, e):
            key = (i, e)
            p = power_cache.get(key)
            if p is None:
                name = self.ring.variables[i].name
                if name not in images:
                    raise DomainMismatchError(f"no image for variable {name!r}")
                p = images[name] ** e
                power_cache[key] = p
            return p

        acc: dict[int, object] = {}
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(self.ring.unpack(m)):
                if e:
                    term = term * power(i, e)
            for tm, tc in term.terms.items():
                acc[tm] = acc.get(tm, 0) + tc
        return Poly(target, acc)

    def change_ring(self, target: PolyRing) -> Poly:
        """Reinterpret in a ring with the same variables (e.g. ZZ -> QQ)."""
        if target.variables != self.ring.variables:
            raise DomainMismatchError("rings have different variables")
        return Poly(target, {m: target.coerce(c) for m, c in self.terms.items()})

    # --- output ------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            neg = c < 0
            a = -c if neg else c
            mono = self.ring.monomial_str(m)
            if not mono:
                body = format_coeff(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_coeff(a)}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({self})"

    def to_json(self, with_vars: bool = True) -> dict:
        terms = []
        for m, c in self.sorted_terms():
            exps = {
                v.name: e for v, e in zip(self.ring.variables, self.ring.unpack(m)) if e
            }
            terms.append({"coeff": format_coeff(c), "exps": exps})
        data = {"terms": terms}
        if with_vars:
            data = {"vars": self.ring.vars_json(), **data}
        return data
