"""Formal group laws and their calculus.

A :class:`FormalGroupLaw` wraps a two-variable truncated series
``F(u, v)`` and derives from it the formal inverse, the difference law
``F^-(u, v) = F(u, chi(v))``, n-series, iterated multi-sums and, over
QQ-algebras, the logarithm and exponential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import DomainMismatchError, InvalidFGLError, SolveError
from .exactalg.poly import ZZ, PolyRing
from .series import TruncatedSeries, solve_implicit

UV = ("u", "v")


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    offending: tuple[int, ...] | None = None
    coefficient: str | None = None
    skipped: bool = False

    def describe(self, names=("u", "v", "w")) -> str:
        if self.skipped:
            return f"{self.name}: skipped"
        if self.passed:
            return f"{self.name}: pass"
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, self.offending or ()) if e
        ) or "1"
        return f"{self.name}: FAIL at {mono} (residual {self.coefficient})"


@dataclass
class ValidationReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed or c.skipped for c in self.checks)

    def __getitem__(self, name) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __str__(self):
        return "\n".join(c.describe() for c in self.checks)

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "axioms": [
                {
                    "axiom": c.name,
                    "status": "skipped" if c.skipped else ("pass" if c.passed else "fail"),
                    **({"at": list(c.offending), "residual": c.coefficient} if not c.passed and not c.skipped else {}),
                }
                for c in self.checks
            ],
        }


def _first_nonzero(series: TruncatedSeries):
    if not series.terms:
        return None
    e = min(series.terms, key=lambda x: (sum(x), x))
    return e, str(series.terms[e])


class FormalGroupLaw:
    """A formal group law ``F(u, v)`` truncated at total degree ``order``."""

    def __init__(self, series: TruncatedSeries, name: str = "custom"):
        if series.nvars != 2:
            raise ValueError("a formal group law is a series in two variables")
        if series.names != UV:
            series = series.embed(UV, dict(zip(series.names, UV)))
        self.series = series
        self.name = name
        self._valid: bool | None = None

    @property
    def ring(self):
        return self.series.ring

    @property
    def order(self) -> int:
        return self.series.order

    def __repr__(self):
        return f"FormalGroupLaw({self.name}, order={self.order}: {self.series})"

    def __call__(self, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
        """Formal sum ``a +_F b`` of two series in the same variables."""
        return self.series.substitute({"u": a, "v": b})

    def truncate(self, order: int) -> FormalGroupLaw:
        law = FormalGroupLaw(self.series.truncate(order), self.name)
        law._valid = self._valid
        return law

    def coefficient(self, i: int, j: int):
        return self.series.coefficient((i, j))

    # --- validation ---------------------------------------------------
    def validate(self) -> ValidationReport:
        F = self.series
        N = self.order
        checks = []

        c0 = F.constant_term()
        checks.append(AxiomCheck("zero constant term", not c0, None if not c0 else (0, 0), str(c0)))

        bad = None
        for exps in [(i, 0) for i in range(N + 1)] + [(0, j) for j in range(1, N + 1)]:
            want = 1 if sum(exps) == 1 else 0
            got = F.coefficient(exps)
            if got != want:
                bad = (exps, str(got - want))
                break
        checks.append(AxiomCheck("unit", bad is None, *(bad or (None, None))))

        swapped = TruncatedSeries(F.ring, UV, N, {(j, i): c for (i, j), c in F.terms.items()})
        diff = _first_nonzero(F - swapped)
        checks.append(AxiomCheck("commutativity", diff is None, *(diff or (None, None))))

        uvw = ("u", "v", "w")
        u, v, w = (TruncatedSeries.variable(F.ring, uvw, N, n) for n in uvw)
        left = F.substitute({"u": F.substitute({"u": u, "v": v}), "v": w})
        right = F.substitute({"u": u, "v": F.substitute({"u": v, "v": w})})
        diff = _first_nonzero(left - right)
        checks.append(AxiomCheck("associativity", diff is None, *(diff or (None, None))))

        if F.ring.graded:
            bad = None
            for (i, j), c in F.sorted_items():
                if not c.is_homogeneous(i + j - 1):
                    bad = ((i, j), str(c))
                    break
            checks.append(AxiomCheck("grading", bad is None, *(bad or (None, None))))
        else:
            checks.append(AxiomCheck("grading", True, skipped=True))

        report = ValidationReport(checks)
        self._valid = report.ok
        return report

    @property
    def validated(self) -> bool:
        if self._valid is None:
            self.validate()
        return self._valid

    def require_valid(self):
        if not self.validated:
            raise InvalidFGLError(f"{self.name} is not a formal group law:\n{self.validate()}")

    # --- calculus -----------------------------------------------------
    def _u(self, names=("u",), order=None) -> TruncatedSeries:
        return TruncatedSeries.variable(self.ring, names, self.order if order is None else order, names[0])

    @cached_property
    def chi(self) -> TruncatedSeries:
        self.require_valid()
        u = self._u()
        try:
            return solve_implicit(lambda g: self(u.truncate(g.order), g), -u, self.order)
        except SolveError as exc:
            raise InvalidFGLError(f"no formal inverse: {exc}") from exc

    def formal_inverse(self) -> TruncatedSeries:
        """The series ``chi(u)`` with ``F(u, chi(u)) = 0``."""
        return self.chi

    @cached_property
    def minus(self) -> TruncatedSeries:
        chi_v = self.chi.embed(UV, {"u": "v"})
        u = TruncatedSeries.variable(self.ring, UV, self.order, "u")
        return self.series.substitute({"u": u, "v": chi_v})

    def difference_law(self) -> TruncatedSeries:
        """``F^-(u, v) = F(u, chi(v))``."""
        return self.minus

    def difference(self, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
        """Formal difference ``a -_F b``."""
        return self.minus.substitute({"u": a, "v": b})

    def n_series(self, n: int, name: str = "u") -> TruncatedSeries:
        """``[n]_F u``; negative n gives the formal inverse of ``[|n|]_F u``."""
        pos = self._positive_n_series(abs(n))
        if n < 0:
            pos = self.chi.substitute({"u": pos}) if pos else pos
        if name != "u":
            pos = pos.embed((name,), {"u": name})
        return pos

    def _positive_n_series(self, n: int) -> TruncatedSeries:
        cache = self.__dict__.setdefault("_nseries", {})
        if n in cache:
            return cache[n]
        if n == 0:
            out = TruncatedSeries.zero(self.ring, ("u",), self.order)
        elif n == 1:
            out = self._u()
        else:
            self.require_valid()
            out = self(self._positive_n_series(n - 1), self._u())
        cache[n] = out
        return out

    def n_series_by_differences(self, n: int) -> TruncatedSeries:
        """``[n]_F u`` for n < 0 as the literal fold ``0 -_F u -_F ... -_F u``."""
        if n >= 0:
            return self.n_series(n)
        u = self._u()
        acc = TruncatedSeries.zero(self.ring, ("u",), self.order)
        for _ in range(-n):
            acc = self.difference(acc, u)
        return acc

    def multi_sum(self, ns, names=None) -> TruncatedSeries:
        """``[n_1]u_1 +_F ... +_F [n_m]u_m`` folded left to right."""
        ns = list(ns)
        if not ns:
            raise ValueError("multi_sum needs at least one summand")
        if names is None:
            names = tuple(f"u{i + 1}" for i in range(len(ns)))
        names = tuple(names)
        if len(names) != len(ns):
            raise ValueError("one variable per summand")
        parts = [self.n_series(n).embed(names, {"u": x}) for n, x in zip(ns, names)]
        acc = parts[0]
        for p in parts[1:]:
            acc = self(acc, p)
        return acc

    # --- logarithm and exponential (QQ-algebras only) -------------------
    @cached_property
    def log(self) -> TruncatedSeries:
        if not self.ring.is_rational:
            raise DomainMismatchError("the logarithm needs a QQ-algebra coefficient ring")
        self.require_valid()
        F = self.series
        # d/dv F(u, v) at v = 0
        dv = TruncatedSeries(
            self.ring, ("u",), self.order - 1,
            {(i,): c.scale(1) for (i, j), c in F.terms.items() if j == 1},
        )
        return dv.inverse().integrate("u")

    def logarithm(self) -> TruncatedSeries:
        return self.log

    @cached_property
    def exp(self) -> TruncatedSeries:
        log = self.log
        t = TruncatedSeries.variable(self.ring, ("t",), self.order, "t")
        return solve_implicit(lambda g: log.substitute({"u": g}) - t.truncate(g.order), t, self.order)

    def exponential(self) -> TruncatedSeries:
        return self.exp

    # --- identities -------------------------------------------------
    def check_identity_c1L(self) -> bool:
        """``F^-(F(u, v), F(0, v)) == u`` modulo truncation."""
        self.require_valid()
        N = self.order
        u, v = (TruncatedSeries.variable(self.ring, UV, N, n) for n in UV)
        zero = TruncatedSeries.zero(self.ring, UV, N)
        lhs = self.difference(self(u, v), self(zero, v))
        return lhs == u

    def check_identity_fgl(self, order: int | None = None) -> bool:
        """``F^-(F(u1,v1), F(u2,v2)) == F(F^-(u1,u2), F^-(v1,v2))``."""
        self.require_valid()
        law = self if order is None or order >= self.order else self.truncate(order)
        names = ("u1", "v1", "u2", "v2")
        u1, v1, u2, v2 = (TruncatedSeries.variable(law.ring, names, law.order, n) for n in names)
        lhs = law.difference(law(u1, v1), law(u2, v2))
        rhs = law(law.difference(u1, u2), law.difference(v1, v2))
        return lhs == rhs

    def grading_ok(self) -> bool:
        if not self.ring.graded:
            return True
        return all(c.is_homogeneous(i + j - 1) for (i, j), c in self.series.terms.items())


def additive(order: int = 10, ring=None) -> FormalGroupLaw:
    ring = ring or PolyRing((), ZZ)
    F = TruncatedSeries(ring, UV, order, {(1, 0): ring.polys.one, (0, 1): ring.polys.one})
    law = FormalGroupLaw(F, "additive")
    return law


def multiplicative(order: int = 10, domain: str = ZZ, beta=None) -> FormalGroupLaw:
    """``u + v - beta*u*v`` over ``domain[beta]``, or with ``beta`` a number."""
    if beta is None:
        ring = PolyRing([("beta", 1)], domain)
        b = ring.gen("beta")
    else:
        ring = PolyRing((), domain)
        b = ring.const(beta)
    one = ring.one
    F = TruncatedSeries(ring, UV, order, {(1, 0): one, (0, 1): one, (1, 1): -b})
    return FormalGroupLaw(F, "multiplicative")


def from_series(series: TruncatedSeries, name: str = "custom") -> FormalGroupLaw:
    return FormalGroupLaw(series, name)


__all__ = [
    "AxiomCheck",
    "FormalGroupLaw",
    "ValidationReport",
    "additive",
    "from_series",
    "multiplicative",
]
