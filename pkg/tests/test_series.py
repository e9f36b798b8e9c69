from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cobcalc.errors import CompositionError, DomainMismatchError, OutOfRangeError, SolveError
from cobcalc.exactalg import QQ, ZZ, PolyRing
from cobcalc.series import TruncatedSeries, monomials, solve_implicit

R = PolyRing([("b", 1)], ZZ)
RQ = R.with_domain(QQ)
UV = ("u", "v")
SYM = {n: sympy.Symbol(n) for n in ("u", "v", "b")}


def series(ring=R, names=UV, order=5, max_terms=6):
    term = st.tuples(
        st.lists(st.integers(0, order), min_size=len(names), max_size=len(names)).map(tuple),
        st.integers(-4, 4),
        st.integers(0, 2),
    )
    return st.lists(term, max_size=max_terms).map(
        lambda ts: TruncatedSeries(
            ring, names, order,
            {e: ring.gen("b") ** k * c for e, c, k in ts if sum(e) <= order},
        )
    )


def to_sympy(s):
    expr = 0
    for e, c in s.terms.items():
        coeff = sympy.sympify(str(c).replace("^", "**"), locals=SYM)
        mono = 1
        for n, k in zip(s.names, e):
            mono *= SYM[n] ** k
        expr += coeff * mono
    return sympy.expand(expr)


def truncate_sympy(expr, names, order):
    poly = sympy.Poly(sympy.expand(expr), *[SYM[n] for n in names])
    return sum(
        (c * sympy.prod([SYM[n] ** k for n, k in zip(names, m)]) for m, c in poly.terms() if sum(m) <= order),
        sympy.Integer(0),
    )


def u_of(order=6, ring=R):
    return TruncatedSeries.variable(ring, ("u",), order, "u")


def test_truncation_and_coefficients():
    u = u_of(3)
    s = (1 + u) ** 5
    assert [s[k] for k in range(4)] == [1, 5, 10, 10]
    with pytest.raises(OutOfRangeError):
        s.coefficient((4,))
    assert s.truncate(1) == 1 + u.truncate(1).scale(5)
    with pytest.raises(OutOfRangeError):
        s.truncate(4)


def test_mismatched_operands():
    u = u_of(3)
    v = TruncatedSeries.variable(R, ("v",), 3, "v")
    with pytest.raises(DomainMismatchError):
        u + v
    with pytest.raises(DomainMismatchError):
        u + TruncatedSeries.variable(RQ, ("u",), 3, "u")


def test_geometric_inverse():
    u = u_of(6)
    b = R.gen("b")
    inv = (1 - u.scale(b)).inverse()
    assert all(inv[k] == b**k for k in range(7))
    with pytest.raises(SolveError):
        (u.scale(2) + 2).inverse()


def test_integrate_needs_rationals():
    with pytest.raises(DomainMismatchError):
        u_of().integrate("u")
    u = u_of(4, RQ)
    assert u.integrate("u")[2] == Fraction(1, 2)
    assert (u**3).derivative("u") == (u**2).scale(3).truncate(3)


def test_composition_requires_no_constant_term():
    u = u_of(4)
    with pytest.raises(CompositionError):
        (u * u).substitute({"u": 1 + u})
    with pytest.raises(DomainMismatchError):
        TruncatedSeries.variable(R, UV, 3, "u").substitute({"u": u})


def test_solve_implicit_reverts_a_series():
    # compositional inverse of u + u^2 is the Catalan series with signs
    u = u_of(8)
    f = u + u * u
    g = solve_implicit(lambda g: f.substitute({"u": g}) - u.truncate(g.order), u, 8)
    catalan = [1, 1, 2, 5, 14, 42, 132, 429]
    assert [g[k] for k in range(1, 9)] == [(-1) ** (k - 1) * catalan[k - 1] for k in range(1, 9)]


def test_solve_implicit_reports_failures():
    u = u_of(4)
    with pytest.raises(SolveError):
        # slope 2 is not a unit over ZZ and the step is not divisible
        solve_implicit(lambda g: g.scale(2) - u.truncate(g.order), u.scale(0), 4)
    with pytest.raises(SolveError):
        solve_implicit(lambda g: u.truncate(g.order), u.scale(0), 4)


def test_monomials_enumeration():
    assert list(monomials(2, 2)) == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert len(list(monomials(3, 4))) == 35


def test_json_round_trip():
    u = u_of(5)
    s = (1 - u.scale(R.gen("b"))).inverse() - 1
    assert TruncatedSeries.from_json(s.to_json(), R) == s
    assert TruncatedSeries.from_json(s.to_json()) == s


@settings(max_examples=50, deadline=None)
@given(series(), series())
def test_product_matches_sympy(a, b):
    assert to_sympy(a * b) == truncate_sympy(to_sympy(a) * to_sympy(b), UV, 5)


@settings(max_examples=50, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == TruncatedSeries.zero(R, UV, 5)


@settings(max_examples=40, deadline=None)
@given(series(), series(names=UV, order=5), series(names=UV, order=5))
def test_substitution_matches_sympy(f, g, h):
    # drop constant terms so composition is defined
    g = g - g.constant_term()
    h = h - h.constant_term()
    got = f.substitute({"u": g, "v": h})
    expr = to_sympy(f).subs({SYM["u"]: sympy.Symbol("G"), SYM["v"]: sympy.Symbol("H")})
    expr = expr.subs({sympy.Symbol("G"): to_sympy(g), sympy.Symbol("H"): to_sympy(h)})
    assert to_sympy(got) == truncate_sympy(expr, UV, 5)


@settings(max_examples=40, deadline=None)
@given(series(names=("u",), order=6))
def test_inverse_is_inverse(s):
    s = s - s.constant_term() + 1
    assert s * s.inverse() == TruncatedSeries.constant(R, ("u",), 6, 1)
