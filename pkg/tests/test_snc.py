import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cobcalc import bmodel as B
from cobcalc.errors import InconsistentLatticeError, UnsupportedConfigurationError
from cobcalc.fgl import additive, multiplicative
from cobcalc.lazard import universal
from cobcalc.snc import SNCDivisor, component_names, pushforward_to_ambient, reassemble, snc_class, support_decomposition

ADD = B.OrientedTheory(additive(8))
MUL = B.OrientedTheory(multiplicative(8))
UNI = B.OrientedTheory(universal(6))


def test_two_components_multiplicative():
    parts = support_decomposition(multiplicative(6), [1, 1])
    assert set(parts) == {(1,), (2,), (1, 2)}
    assert str(parts[(1,)]) == "1"
    assert str(parts[(1, 2)]) == "-beta"
    E = SNCDivisor.hyperplanes(B.projective_space(2, MUL), [1, 1])
    cls = snc_class(E)
    assert str(cls[(1, 2)].cls) == "-beta*[h0]"
    assert cls[(1, 2)].dim == 0


def test_multiplicity_on_a_line():
    E = SNCDivisor.hyperplanes(B.projective_space(1, MUL), [2])
    cls = snc_class(E)
    assert cls[(1,)].dim == 0
    assert str(pushforward_to_ambient(E)) == "2*[h1]"


def test_additive_faces_vanish_above_codim_one():
    parts = support_decomposition(additive(6), [3, 1, 2])
    assert {J: str(g) for J, g in parts.items()} == {(1,): "3", (2,): "1", (3,): "2"}


def test_decomposition_matches_closed_form():
    # multiplicative: F = (1 - prod (1 - beta u_i)^n_i) / beta
    mults = [2, 1, 3]
    parts = support_decomposition(multiplicative(6), mults)
    beta = sympy.Symbol("beta")
    us = sympy.symbols("u1 u2 u3")
    closed = sympy.expand((1 - sympy.prod([(1 - beta * u) ** n for u, n in zip(us, mults)])) / beta)
    # monomials using all three variables, divided by u1*u2*u3, within the truncation
    poly = sympy.Poly(closed, *us)
    g123 = sum(
        (c * sympy.prod([u ** (e - 1) for u, e in zip(us, m)]) for m, c in poly.terms() if all(m) and sum(m) <= 6),
        sympy.Integer(0),
    )
    assert sympy.sympify(str(parts[(1, 2, 3)]).replace("^", "**"), locals={"beta": beta}) == sympy.expand(g123)


@pytest.mark.parametrize("law", [additive(7), multiplicative(7), universal(7)], ids=["add", "mul", "uni"])
def test_reassembly(law):
    for mults in ([1], [1, 1], [2, 3], [1, 2, 1], [3, 1, 1, 2]):
        parts = support_decomposition(law, mults)
        assert reassemble(parts, len(mults), law.order) == law.multi_sum(mults, component_names(len(mults)))
        assert all(g.order == law.order - len(J) for J, g in parts.items())


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["add", "mul", "uni"]),
    st.integers(1, 4),
    st.lists(st.integers(1, 3), min_size=1, max_size=4),
)
def test_pushforward_is_c1_of_the_divisor_bundle(key, n, mults):
    # a sum of hyperplanes is cut out by a section of O(sum n_i)
    theory = {"add": ADD, "mul": MUL, "uni": UNI}[key]
    pn = B.projective_space(n, theory)
    E = SNCDivisor.hyperplanes(pn, mults)
    assert pushforward_to_ambient(E) == B.c1_apply(pn.unit(), f"O({sum(mults)})")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=2, max_size=4).flatmap(
    lambda ms: st.tuples(st.just(ms), st.permutations(range(1, len(ms) + 1)))
))
def test_relabel_symmetry(data):
    mults, perm = data
    E = SNCDivisor.hyperplanes(B.projective_space(3, MUL), mults)
    F = E.relabel(perm)
    assert [m for _, m in F.components] == [mults[perm.index(i + 1)] for i in range(len(mults))]
    a, b = snc_class(E), snc_class(F)
    for t in a.terms:
        J2 = tuple(sorted(perm[i - 1] for i in t.J))
        assert b[J2].cls == t.cls


def test_json_round_trip():
    E = SNCDivisor.hyperplanes(B.projective_space(3, MUL), [1, 2])
    assert SNCDivisor.from_json(E.to_json(), MUL).to_json() == E.to_json()
    custom = {
        "ambient": {"type": "Pn", "n": 3},
        "components": [{"bundle": "O(2)", "mult": 1}, {"bundle": "O(1)", "mult": 1}],
        "faces": [{"J": [1], "dim": 2}, {"J": [2], "dim": 2}, {"J": [1, 2], "dim": 1}],
    }
    F = SNCDivisor.from_json(custom, MUL)
    assert not F.generic
    assert SNCDivisor.from_json(F.to_json(), MUL).to_json() == F.to_json()
    assert str(snc_class(F)[(1, 2)].cls) == "-beta*[h0]"


def _div(faces, comps=None):
    return {
        "ambient": {"type": "Pn", "n": 3},
        "components": [{"mult": 1}, {"mult": 1}] if comps is None else comps,
        "faces": faces,
    }


@pytest.mark.parametrize("data,match", [
    (_div([{"J": [1], "dim": 2}, {"J": [1, 2], "dim": 1}]), "is not"),
    (_div([{"J": [1], "dim": 2}, {"J": [2], "dim": 1}, {"J": [1, 2], "dim": 1}]), "must drop"),
    (_div([{"J": [3], "dim": 2}]), "bad face"),
    (_div([{"J": [1], "dim": 3}]), "dimension"),
    (_div("generic", [{"mult": 0}]), "multiplicity"),
    (_div([], []), "at least one"),
])
def test_inconsistent_lattices(data, match):
    with pytest.raises(InconsistentLatticeError, match=match):
        SNCDivisor.from_json(data, MUL)


def test_unsupported_configurations():
    with pytest.raises(UnsupportedConfigurationError):
        SNCDivisor.from_json({"ambient": {"type": "P1xP1"}, "components": []}, MUL)
    E = SNCDivisor.from_json(_div([{"J": [1], "dim": 2}, {"J": [2], "dim": 2}]), MUL)
    with pytest.raises(UnsupportedConfigurationError):
        pushforward_to_ambient(E)
    mixed = _div("generic", [{"bundle": "O(1)"}, {"bundle": "O(2)"}])
    with pytest.raises(UnsupportedConfigurationError):
        SNCDivisor.from_json(mixed, MUL)
