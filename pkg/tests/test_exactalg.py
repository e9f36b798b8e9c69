from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from cobcalc.errors import CobcalcError, DomainMismatchError
from cobcalc.exactalg import (
    QQ,
    ZZ,
    IntegerMatrix,
    LatticeReduction,
    PolyRing,
    invariant_factors,
    lattice_normal_form,
    poly_from_json,
    smith_normal_form,
)
from cobcalc.exactalg.poly import MAX_EXPONENT

R = PolyRing([("x", 1), ("y", 2), ("z", 3)], ZZ)
X, Y, Z = (sympy.Symbol(n) for n in "xyz")


def polys(ring=R, max_terms=5, max_exp=3):
    term = st.tuples(
        st.integers(-6, 6),
        st.dictionaries(st.sampled_from([v.name for v in ring.variables]), st.integers(0, max_exp), max_size=3),
    )
    return st.lists(term, max_size=max_terms).map(ring.from_terms)


def to_sympy(p):
    return sympy.sympify(str(p).replace("^", "**")) if p else sympy.Integer(0)


# --- polynomials -----------------------------------------------------------


def test_printing_and_parsing():
    x, y = R.gen("x"), R.gen("y")
    assert str(x**2 - y) == "x^2 - y"
    assert str(-(x * y) + 3) == "3 - x*y"
    assert R.parse("x^2 - y") == x**2 - y
    q = PolyRing([("a11", 1)], QQ)
    half = q.gen("a11").scale(Fraction(3, 2)) ** 2
    assert str(half) == "9/4*a11^2"
    assert q.parse(str(half)) == half


def test_grading():
    p = R.parse("x^3 + x*y + z")
    assert p.is_homogeneous(3)
    assert not R.parse("x + y").is_homogeneous()
    assert set(R.parse("x + y + z").homogeneous_parts()) == {1, 2, 3}
    assert R.zero.degree() == -1


def test_parse_rejects_garbage():
    for bad in ["", "x**2", "w + 1", "x*"]:
        with pytest.raises(CobcalcError):
            R.parse(bad)


def test_mixed_domains_rejected():
    qr = R.with_domain(QQ)
    with pytest.raises(DomainMismatchError, match="mixed coefficient domains"):
        R.gen("x") + qr.gen("x")


def test_exponent_overflow_guard():
    big = R.from_terms([(1, {"x": MAX_EXPONENT})])
    with pytest.raises(OverflowError):
        big * R.gen("x")
    with pytest.raises(ValueError):
        R.pack({"x": MAX_EXPONENT + 1})


def test_exact_division():
    p = R.parse("4*x + 6*y")
    assert p.exact_div(2) == R.parse("2*x + 3*y")
    with pytest.raises(ArithmeticError):
        p.exact_div(4)


def test_evaluate_is_a_homomorphism_example():
    target = PolyRing([("t", 1)], ZZ)
    t = target.gen("t")
    images = {"x": t, "y": t**2 + 1, "z": target.zero}
    p = R.parse("x^2*y - 3*z + 2")
    assert p.evaluate(images, target) == t**4 + t**2 + 2


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R.zero
    assert a * R.one == a


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_product_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@settings(max_examples=60, deadline=None)
@given(polys())
def test_text_and_json_round_trip(p):
    assert R.parse(str(p)) == p if p else True
    assert R.from_json(p.to_json()) == p
    assert poly_from_json(p.to_json()) == p
    for m in p.terms:
        assert R.pack(R.unpack(m)) == m


# --- Smith normal form -------------------------------------------------------


def _check_snf(rows):
    m = IntegerMatrix(rows)
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert d.is_diagonal()
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    nonzero = [x for x in diag if x]
    assert all(x > 0 for x in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert diag[: len(nonzero)] == nonzero
    return nonzero


def test_snf_example():
    assert _check_snf([[2, 4], [6, 8]]) == [2, 4]
    assert _check_snf([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]) == [1, 10, 30]


def test_snf_degenerate_shapes():
    assert _check_snf([[0, 0], [0, 0]]) == []
    assert _check_snf([[5]]) == [5]
    assert _check_snf([[3, 6, 9]]) == [3]


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda r: st.integers(1, 4).flatmap(
            lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )
)
def test_snf_against_sympy(rows):
    ours = _check_snf(rows)
    theirs = [int(x) for x in sympy_invariant_factors(sympy.Matrix(rows)) if x]
    assert ours == [abs(x) for x in theirs]
    assert invariant_factors(IntegerMatrix(rows)) == ours


# --- lattices ----------------------------------------------------------------


def test_lattice_reduction_example():
    lat = lattice_normal_form([[2, 0], [0, 2]])
    assert lat.reduce([3, 3]) == [1, 1]
    assert lat.torsion == [2, 2]
    assert lat.quotient_rank == 0


def test_lattice_pivot_above_one():
    lat = lattice_normal_form([[2, -3, -2, 0]])
    assert lat.pivots == [0] and lat.basis == [[2, -3, -2, 0]]
    assert lat.reduce([1, 0, 0, 0]) == [1, 0, 0, 0]
    assert lat.reduce([3, 0, 0, 0]) == [1, 3, 2, 0]
    assert lat.torsion == []


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=1, max_size=5),
    st.lists(st.integers(-9, 9), min_size=4, max_size=4),
    st.lists(st.integers(-3, 3), min_size=5, max_size=5),
)
def test_lattice_normal_form_is_canonical(gens, v, coeffs):
    lat = LatticeReduction(4)
    for g in gens:
        lat.add(g)
    # every generator reduces to zero
    assert all(lat.contains(g) for g in gens)
    # the normal form only depends on the coset
    shifted = list(v)
    for c, g in zip(coeffs, gens):
        shifted = [a + c * b for a, b in zip(shifted, g)]
    assert lat.reduce(shifted) == lat.reduce(v)
    assert lat.reduce(lat.reduce(v)) == lat.reduce(v)
    # rank agrees with an independent computation
    assert lat.rank == sympy.Matrix(gens).rank()
    # pivots positive, above-pivot entries reduced
    for k, (row, c) in enumerate(zip(lat.basis, lat.pivots)):
        assert row[c] > 0 and all(x == 0 for x in row[:c])
        for other in lat.basis[:k]:
            assert 0 <= other[c] < row[c]
