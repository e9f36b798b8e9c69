from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cobcalc import bmodel as B
from cobcalc.axioms import model_axioms
from cobcalc.errors import (
    DomainMismatchError,
    OutOfRangeError,
    TheoryMismatchError,
    UnknownBundleError,
    UnregisteredMapError,
    UnsupportedClassError,
)
from cobcalc.exactalg import QQ, PolyRing
from cobcalc.fgl import additive, multiplicative
from cobcalc.laws import theta
from cobcalc.lazard import universal

ADD = B.OrientedTheory(additive(10))
MUL = B.OrientedTheory(multiplicative(10))
UNI = B.OrientedTheory(universal(8))
TODD = B.OrientedTheory(multiplicative(10, QQ, beta=1))


def p(theory, text):
    return theory.ring.reduce(theory.ring.polys.parse(text))


# --- projective spaces -------------------------------------------------------


def test_pn_cells_and_section():
    p3 = B.projective_space(3, MUL)
    assert [c.id for c in p3.cells] == ["h0", "h1", "h2", "h3"]
    assert p3.cells[2].word_str() == "c1(O(1))^2"
    assert B.c1_apply(p3.unit(), "O(1)") == p3.cell_class("h1")
    assert B.c1_apply(p3.cell_class("h3"), "O(1)").is_zero()


def test_c1_of_twists_examples():
    p2 = B.projective_space(2, MUL)
    assert str(B.c1_apply(p2.unit(), "O(2)")) == "2*[h1] - beta*[h2]"
    assert str(B.c1_apply(p2.unit(), "O(-1)")) == "-[h1] - beta*[h2]"
    assert B.c1_apply(p2.unit(), "O(0)").is_zero()
    p4 = B.projective_space(4, ADD)
    assert str(B.c1_apply(p4.unit(), "O(-3)")) == "-3*[h1]"


def test_c1_twist_matches_closed_form():
    # c1(O(d)) = (1 - (1 - beta*h)^d)/beta truncated at h^(n+1)
    n = 5
    pn = B.projective_space(n, MUL)
    h, beta = sympy.symbols("h beta")
    for d in range(-3, 5):
        closed = sympy.expand(sympy.series(sympy.simplify((1 - (1 - beta * h) ** d) / beta), h, 0, n + 1).removeO())
        got = B.c1_apply(pn.unit(), f"O({d})")
        for k in range(n + 1):
            coeff = closed.coeff(h, k)
            assert got[f"h{k}"] == p(MUL, str(coeff).replace("**", "^")) if coeff else not got[f"h{k}"]


def test_hypersurface_examples():
    assert str(B.hypersurface_class(2, 2, MUL)) == "2*[h1] - beta*[h2]"
    assert str(B.hypersurface_class(2, 2, UNI)) == "2*[h1] + a11*[h2]"
    assert str(B.hypersurface_class(3, 5, ADD)) == "5*[h1]"


def test_todd_genus_of_projective_spaces():
    assert all(B.projective_space_class(m, TODD) == p(TODD, "1") for m in range(0, 9))
    with pytest.raises(DomainMismatchError):
        B.projective_space_class(2, MUL)
    mq = B.OrientedTheory(multiplicative(10, QQ))
    assert B.projective_space_class(4, mq) == p(mq, "beta^4")
    aq = B.OrientedTheory(additive(10, PolyRing((), QQ)))
    assert B.projective_space_class(0, aq) == p(aq, "1")
    assert B.projective_space_class(3, aq).is_zero


@pytest.mark.parametrize("n,d", [(2, 1), (2, 3), (3, 4), (4, 2), (4, 6), (5, 3), (6, 7)])
def test_hypersurface_todd_genus(n, d):
    # chi(O_X) = chi(O_P) - chi(O_P(-d)) = 1 - (-1)^n binom(d-1, n)
    X = B.hypersurface_class(n, d, TODD)
    assert B.pushforward_to_point(X) == p(TODD, str(1 - (-1) ** n * comb(d - 1, n)))


def test_order_guard():
    with pytest.raises(OutOfRangeError):
        B.projective_space(11, ADD)
    with pytest.raises(OutOfRangeError):
        B.eval_series(additive(2).series, [B.projective_space(3, ADD).c1("O(1)")] * 2)


# --- products -----------------------------------------------------------------


def test_product_cells_and_bundles():
    xy = B.product(B.projective_space(1, MUL), B.projective_space(2, MUL))
    assert len(xy.cells) == 6 and xy.dim == 3
    ab = B.external_product(xy.factors[0].cell_class("h1"), xy.factors[1].cell_class("h1"), xy)
    assert ab == xy.cell_class("h1|h1")
    # O(1,1) = p1*O(1) (x) p2*O(1)
    both = B.c1_apply(xy.unit(), "O(1,1)")
    assert str(both) == "[h0|h1] + [h1|h0] - beta*[h1|h1]"


def test_product_pushforward_multiplies():
    x, y = B.projective_space(2, TODD), B.projective_space(3, TODD)
    a = B.hypersurface_class(2, 3, TODD)
    b = B.hypersurface_class(3, 2, TODD)
    ab = B.external_product(a, b)
    assert B.pushforward_to_point(ab) == B.pushforward_to_point(a) * B.pushforward_to_point(b)
    assert B.pushforward_to_point(B.product(x, y).unit()) == p(TODD, "1")


def test_theory_mismatch():
    with pytest.raises(TheoryMismatchError):
        B.product(B.projective_space(1, ADD), B.projective_space(1, MUL))
    with pytest.raises(DomainMismatchError):
        B.projective_space(1, ADD).unit() + B.projective_space(1, MUL).unit()


# --- projective bundles ---------------------------------------------------------


def test_pbundle_example():
    p1 = B.projective_space(1, MUL)
    pe = B.projective_bundle(B.SplitBundle(p1, ("O(0)", "O(1)")))
    assert pe.dim == 2 and [c.id for c in pe.cells] == ["xi0|h0", "xi0|h1", "xi1|h0", "xi1|h1"]
    xi = pe.c1("xi")
    assert xi @ xi == pe.c1("q*O(1)") @ xi
    assert pe.c1("O(1)") == xi


def test_chern_and_euler():
    p2 = B.projective_space(2, MUL)
    E = B.SplitBundle(p2, ("O(1)", "O(2)", "O(-1)"))
    assert B.chern_class(E, 0) == B.Matrix.identity(p2)
    assert B.chern_class(E, 1) == p2.c1("O(1)") + p2.c1("O(2)") + p2.c1("O(-1)")
    assert B.euler_class(E) == B.chern_class(E, 3)
    with pytest.raises(OutOfRangeError):
        B.chern_class(E, 4)
    with pytest.raises(OutOfRangeError):
        B.projective_bundle(B.SplitBundle(p2, ()))
    with pytest.raises(UnknownBundleError):
        B.SplitBundle(p2, ("L",))


def test_bundle_projection_has_no_pushforward():
    pe = B.projective_bundle(B.SplitBundle(B.projective_space(1, ADD), ("O(0)", "O(1)")))
    q = B.bundle_projection(pe)
    assert B.pull_back(q, pe.base.unit()) == pe.unit()
    with pytest.raises(UnregisteredMapError):
        B.push_forward(q, pe.unit())
    with pytest.raises(UnsupportedClassError):
        B.pushforward_to_point(B.projective_bundle(B.SplitBundle(B.projective_space(1, TODD), ("O(0)", "O(1)"))).unit())


# --- maps ---------------------------------------------------------------------


def test_linear_embedding():
    p1, p3 = B.projective_space(1, MUL), B.projective_space(3, MUL)
    i = B.linear_embedding(p1, p3)
    assert B.push_forward(i, p1.unit()) == p3.cell_class("h2")
    assert i.pulled_back_symbol("O(2)") == "O(2)"
    with pytest.raises(UnregisteredMapError):
        B.pull_back(i, p3.unit())
    with pytest.raises(UnregisteredMapError):
        B.linear_embedding(p3, p1)
    with pytest.raises(UnknownBundleError):
        i.pulled_back_symbol("O(9)")
    # projection formula along the embedding
    for d in (1, 2, -1):
        lhs = B.c1_apply(B.push_forward(i, p1.unit()), f"O({d})")
        rhs = B.push_forward(i, B.c1_apply(p1.unit(), f"O({d})"))
        assert lhs == rhs


def test_compose_and_structure_maps():
    p1, p2, p4 = (B.projective_space(n, TODD) for n in (1, 2, 4))
    f = B.compose(B.linear_embedding(p1, p2), B.linear_embedding(p2, p4))
    assert B.push_forward(f, p1.unit()) == p4.cell_class("h3")
    st_map = B.structure_map(p4)
    pt = st_map.target
    assert B.push_forward(st_map, p4.unit()) == pt.unit()
    assert B.pull_back(st_map, pt.unit()) == p4.unit()
    assert B.structure_map(B.projective_space(2, MUL)).push_matrix is None


def test_projection_pushforward():
    xy = B.product(B.projective_space(1, TODD), B.projective_space(2, TODD))
    p1 = B.projection(xy, 1)
    a = xy.factors[0].cell_class("h1")
    assert B.pull_back(p1, a) == xy.cell_class("h1|h0")
    assert B.push_forward(p1, xy.cell_class("h1|h2")) == a
    with pytest.raises(UnregisteredMapError):
        B.projection(xy.factors[0])


# --- specialization -----------------------------------------------------------


def test_specialize_universal_to_multiplicative():
    target_law = multiplicative(8)
    target = B.OrientedTheory(target_law)
    th = theta(target_law, 7)
    X = B.specialize(B.hypersurface_class(2, 2, UNI), th, target)
    assert str(X) == "2*[h1] - beta*[h2]"
    assert X == B.hypersurface_class(2, 2, target)


@pytest.mark.parametrize("d", [1, 2, 3, -1])
def test_specialize_is_natural(d):
    target_law = multiplicative(8)
    target = B.OrientedTheory(target_law)
    th = theta(target_law, 7)
    p4 = B.projective_space(4, UNI)
    cls = p4.class_from({"h1": 3, "h2": "a11", "h3": "a12 - a11^2"})
    lhs = B.specialize(B.c1_apply(cls, f"O({d})"), th, target)
    rhs = B.c1_apply(B.specialize(cls, th, target), f"O({d})")
    assert lhs == rhs
    sq = B.intersection_product(cls, cls)
    s = B.specialize(cls, th, target)
    assert B.specialize(sq, th, target) == B.intersection_product(s, s)
    p2 = B.projective_space(2, UNI)
    i = B.linear_embedding(p2, p4)
    pushed = B.specialize(B.push_forward(i, p2.cell_class("h1", "a11")), th, target)
    i_t = B.linear_embedding(B.projective_space(2, target), B.projective_space(4, target))
    assert pushed == B.push_forward(i_t, B.specialize(p2.cell_class("h1", "a11"), th, target))


def test_specialize_rejects_wrong_ring():
    th = theta(multiplicative(8), 7)
    with pytest.raises(DomainMismatchError):
        B.specialize(B.projective_space(1, MUL).unit(), th)


# --- axioms -------------------------------------------------------------------


@pytest.mark.parametrize("theory", [ADD, MUL, UNI], ids=["additive", "multiplicative", "universal"])
def test_model_axioms(theory):
    results = model_axioms(theory, max_n=3, max_rank=2)
    failed = [label for label, ok in results if not ok]
    assert not failed, failed[:5]
    assert len(results) > 200


# --- properties ------------------------------------------------------------------

SPACES = {
    "add": B.product(B.projective_space(2, ADD), B.projective_space(1, ADD)),
    "mul": B.product(B.projective_space(2, MUL), B.projective_space(1, MUL)),
    "uni": B.projective_space(3, UNI),
}


def classes(key):
    space = SPACES[key]
    # keep coefficient degrees low so triple products stay in the presented range
    gens = [0] + [g for g in space.theory.ring.polys.gens() if g.degree() == 1]
    coeff = st.tuples(st.integers(-3, 3), st.sampled_from(gens)).map(
        lambda t: space.theory.elem(t[0]) * (t[1] if t[1] else 1)
    )
    return st.lists(coeff, min_size=len(space.cells), max_size=len(space.cells)).map(
        lambda v: B.BordismClass(space, [space.theory.ring.reduce(x) for x in v])
    )


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(SPACES)).flatmap(lambda k: st.tuples(classes(k), classes(k), classes(k))))
def test_intersection_ring_axioms(abc):
    a, b, c = abc
    one = a.space.unit()
    assert B.intersection_product(one, a) == a
    assert B.intersection_product(a, one) == a
    assert B.intersection_product(a, b) == B.intersection_product(b, a)
    assert B.intersection_product(B.intersection_product(a, b), c) == B.intersection_product(
        a, B.intersection_product(b, c)
    )
    assert B.intersection_product(a, b + c) == B.intersection_product(a, b) + B.intersection_product(a, c)


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 5))
def test_fgl_axiom_on_pn(a, b, n):
    pn = B.projective_space(n, MUL)
    lhs = B.eval_series(MUL.law.series, [pn.c1(f"O({a})"), pn.c1(f"O({b})")])
    assert lhs == pn.c1(f"O({a + b})")
    assert pn.c1(f"O({a})⊗O({b})") == pn.c1(f"O({a + b})")
