"""The acceptance suite, shared by the test runner and ``--selftest``.

Every criterion is exact; each function returns ``(passed, detail)``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from . import axioms
from . import bmodel as B
from . import snc
from .fgl import additive, multiplicative
from .lazard import build, classifying_map, universal
from .series import TruncatedSeries


def partition_counts(n_max: int) -> list[int]:
    """``p(0..n_max)`` by the coin-change recurrence."""
    p = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for total in range(part, n_max + 1):
            p[total] += p[total - part]
    return p


def _laws(order: int):
    return [additive(order), multiplicative(order), universal(order)]


def ac1_axioms():
    reports = {f"{law.name}@{law.order}": law.validate() for law in [additive(10), multiplicative(10), universal(10), universal(8)]}
    bad = [k for k, r in reports.items() if not r.ok]
    return not bad, "all valid" if not bad else f"invalid: {bad}"


def ac2_inverse():
    bad = []
    for law in _laws(10):
        u = TruncatedSeries.variable(law.ring, ("u",), 10, "u")
        chi = law.chi
        if not law(u, chi).is_zero():
            bad.append(f"{law.name}: F(u, chi(u)) != 0")
        if chi.substitute({"u": chi}) != u:
            bad.append(f"{law.name}: chi(chi(u)) != u")
    return not bad, "; ".join(bad) or "F(u, chi(u)) = 0 and chi o chi = id"


def ac3_c1L():
    ok = universal(8).check_identity_c1L()
    return ok, "identity holds at order 8" if ok else "identity fails"


def ac4_fgl():
    ok = universal(6).check_identity_fgl()
    return ok, "identity holds at order 6" if ok else "identity fails"


def ac5_lazard():
    L = build(6)
    p = partition_counts(6)
    ranks = [L.degree_rank(n) for n in range(1, 7)]
    torsion = [L.torsion(n) for n in range(1, 7)]
    ok = ranks == p[1:] and not any(torsion)
    return ok, f"ranks {ranks} vs partitions {p[1:]}, torsion {torsion}"


def ac6_classifying():
    U = universal(8)
    L = build(7)
    bad = []
    for target in (additive(8), multiplicative(8)):
        try:
            theta = classifying_map(L, target)
        except Exception as exc:
            bad.append(f"{target.name}: {exc}")
            continue
        if theta.apply_series(U.series) != target.series:
            bad.append(f"{target.name}: image law differs")
    return not bad, "; ".join(bad) or "relations killed and laws matched"


def ac7_log():
    law = multiplicative(12, "QQ")
    u = TruncatedSeries.variable(law.ring, ("u",), 12, "u")
    log, exp = law.log, law.exp.embed(("u",), {"t": "u"})
    ok1 = exp.substitute({"u": log}) == u
    names = ("u", "v")
    lu = log.embed(names)
    lv = log.embed(names, {"u": "v"})
    ok2 = exp.substitute({"u": lu + lv}) == law.series
    return ok1 and ok2, f"exp(log u) = u: {ok1}; F = exp(log u + log v): {ok2}"


def ac8_model():
    bad, total = [], 0
    for law in (additive(10), multiplicative(10), universal(8)):
        res = axioms.model_axioms(B.OrientedTheory(law))
        total += len(res)
        bad += [f"{law.name}: {label}" for label, ok in res if not ok]
    return not bad, f"{total} instances" + (f"; failing: {bad[:5]}" if bad else "")


def ac9_hypersurface():
    bad = []
    theories = {
        "additive": B.OrientedTheory(additive(10)),
        "multiplicative": B.OrientedTheory(multiplicative(10)),
        "universal": B.OrientedTheory(universal(8)),
    }
    for name, th in theories.items():
        for n in range(1, 5):
            pn = B.projective_space(n, th)
            for d in range(1, 6):
                # O(d) built as an iterated tensor product of O(1)
                m = pn.c1("O(1)")
                for _ in range(d - 1):
                    m = pn.tensor_matrix(m, pn.c1("O(1)"))
                if B.hypersurface_class(n, d, th) != m(pn.unit()):
                    bad.append(f"{name} n={n} d={d}")
    add = theories["additive"]
    for n in range(1, 5):
        for d in range(1, 6):
            if B.hypersurface_class(n, d, add) != B.projective_space(n, add).cell_class("h1", d):
                bad.append(f"additive n={n} d={d} is not d*h1")
    mult8 = B.OrientedTheory(multiplicative(8))
    theta = classifying_map(build(7), mult8.law)
    for n in range(1, 5):
        for d in range(1, 6):
            image = B.specialize(B.hypersurface_class(n, d, theories["universal"]), theta, mult8)
            if image != B.hypersurface_class(n, d, mult8):
                bad.append(f"naturality n={n} d={d}")
    return not bad, "; ".join(bad[:5]) or "all classes agree"


def ac10_snc():
    bad = []
    for law in (additive(10), multiplicative(10), universal(8)):
        th = B.OrientedTheory(law)
        for n in range(1, 5):
            pn = B.projective_space(n, th)
            E = snc.SNCDivisor.hyperplanes(pn, [1])
            term = snc.snc_class(E).terms
            face = E.faces[(1,)].space
            if len(term) != 1 or term[0].cls != face.unit():
                bad.append(f"{law.name}: reduced class on P{n}")
            for d in range(1, 6):
                E = snc.SNCDivisor.hyperplanes(pn, [1] * d)
                if snc.pushforward_to_ambient(E) != B.hypersurface_class(n, d, th):
                    bad.append(f"{law.name}: P{n} d={d}")
    return not bad, "; ".join(bad[:5]) or "all configurations agree"


def ac11_euler(seed: int = 2024, count: int = 20):
    rng = random.Random(seed)
    theories = [B.OrientedTheory(law) for law in (additive(10), multiplicative(10), universal(8))]
    bad = []
    for k in range(count):
        th = theories[k % len(theories)]
        n = rng.randint(0, 3)
        rank = rng.randint(1, 4)
        pn = B.projective_space(n, th)
        E = B.SplitBundle(pn, tuple(f"O({rng.randint(-3, 3)})" for _ in range(rank)))
        if B.euler_class(E) != B.chern_class(E, rank):
            bad.append(f"{th.name} P{n} {E.symbols}")
    return not bad, "; ".join(bad) or f"{count} random bundles"


def ac12_intersection():
    bad = []
    for law in (additive(10), multiplicative(10), universal(8)):
        th = B.OrientedTheory(law)
        for n in range(0, 5):
            pn = B.projective_space(n, th)
            cells = [pn.cell_class(c.id) for c in pn.cells]
            # a mixed class exercising the ring coefficients
            cells.append(B.hypersurface_class(n, 2, th) if n else pn.unit())
            one = pn.unit()
            for a in cells:
                if B.intersection_product(a, one) != a or B.intersection_product(one, a) != a:
                    bad.append(f"{law.name} P{n}: unit")
                for b in cells:
                    ab = B.intersection_product(a, b)
                    if ab != B.intersection_product(b, a):
                        bad.append(f"{law.name} P{n}: commutativity")
                    for c in cells:
                        if B.intersection_product(ab, c) != B.intersection_product(a, B.intersection_product(b, c)):
                            bad.append(f"{law.name} P{n}: associativity")
            power = one
            h = pn.cell_class("h1") if n else one
            for _ in range(n):
                power = B.intersection_product(power, h)
            if power != pn.cell_class(f"h{n}"):
                bad.append(f"{law.name} P{n}: h^n")
    return not bad, "; ".join(sorted(set(bad))[:5]) or "ring axioms hold"


def ac13_genus():
    th = B.OrientedTheory(multiplicative(10, "QQ", beta=1))
    values = [B.pushforward_to_point(B.projective_space(n, th).unit()) for n in range(9)]
    ok = all(v == 1 for v in values)
    return ok, "Todd genus of P0..P8: " + ", ".join(str(v) for v in values)


@dataclass
class Criterion:
    number: int
    title: str
    limit: float
    run: Callable[[], tuple[bool, str]]


CRITERIA = [
    Criterion(1, "FGL axiom suite", 60, ac1_axioms),
    Criterion(2, "formal inverse", 10, ac2_inverse),
    Criterion(3, "c1 difference identity", 120, ac3_c1L),
    Criterion(4, "four-variable difference identity", 300, ac4_fgl),
    Criterion(5, "Lazard ranks and torsion", 120, ac5_lazard),
    Criterion(6, "classifying maps", 60, ac6_classifying),
    Criterion(7, "logarithm and exponential", 10, ac7_log),
    Criterion(8, "model axioms", 60, ac8_model),
    Criterion(9, "hypersurface classes", 10, ac9_hypersurface),
    Criterion(10, "normal crossing divisors", 30, ac10_snc),
    Criterion(11, "Euler class vs top Chern class", 30, ac11_euler),
    Criterion(12, "intersection ring", 10, ac12_intersection),
    Criterion(13, "Todd genus", 10, ac13_genus),
]


@dataclass
class Outcome:
    criterion: Criterion
    passed: bool
    seconds: float
    detail: str

    @property
    def line(self) -> str:
        c = self.criterion
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] AC{c.number:<2} {c.title}: {self.seconds:.2f}s (limit {c.limit:g}s) - {self.detail}"

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion.number,
            "title": self.criterion.title,
            "passed": self.passed,
            "seconds": f"{self.seconds:.3f}",
            "limit": str(self.criterion.limit),
            "detail": self.detail,
        }


def run_criterion(c: Criterion) -> Outcome:
    start = time.perf_counter()
    try:
        ok, detail = c.run()
    except Exception as exc:  # a crash is a failure, reported not raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if ok and elapsed > c.limit:
        ok, detail = False, f"{detail}; exceeded time limit"
    return Outcome(c, ok, elapsed, detail)


def run_all(report: Callable[[str], None] | None = None) -> list[Outcome]:
    out = []
    for c in CRITERIA:
        o = run_criterion(c)
        if report:
            report(o.line)
        out.append(o)
    return out
