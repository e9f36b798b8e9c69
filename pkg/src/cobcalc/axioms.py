"""Axiom instances on the cellular models, checked as exact matrix identities.

Each check returns a list of ``(label, passed)`` pairs so callers can
report the first failing instance.
"""

from __future__ import annotations

from itertools import product as iproduct

from . import bmodel as B

Results = list[tuple[str, bool]]


def _pn_bundles(pn: B.CellSpace) -> list[str]:
    return ["O(1)", "O(2)", "O(-1)", "O(3)"]


def _spaces(theory: B.OrientedTheory, max_n: int = 4, max_rank: int = 3):
    pns = [B.projective_space(n, theory) for n in range(max_n + 1)]
    products = [B.product(pns[a], pns[b]) for a in range(max_n + 1) for b in range(a, max_n + 1)]
    p2 = pns[2]
    twists = ["O(0)", "O(1)", "O(-1)", "O(2)"]
    bundles = []
    for r in range(1, max_rank + 1):
        for combo in iproduct(twists, repeat=r):
            if list(combo) == sorted(combo, key=twists.index):
                bundles.append(B.SplitBundle(p2, combo))
    pbundles = [B.projective_bundle(E) for E in bundles]
    return pns, products, pbundles


def check_space(space: B.CellSpace, extra: list[str] = ()) -> Results:
    name = space.name
    symbols = list(dict.fromkeys(list(space.generators) + list(extra)))
    mats = {s: space.c1(s) for s in symbols}
    out = [
        (f"{name}: cells are words in c1", space.check_cell_words()),
        (f"{name}: (Dim)", B.check_dim_axiom(space, symbols)),
        (f"{name}: (A5) commuting", B.check_commuting(space, symbols)),
        (f"{name}: c1 lowers degree", all(space.lowers_degree(m) for m in mats.values())),
    ]
    return out


def check_pn(pn: B.CellSpace, span: int = 2) -> Results:
    n = pn.dim
    out = check_space(pn, _pn_bundles(pn))
    one = pn.unit()
    if n:
        out.append((f"{pn.name}: (Sect)", B.c1_apply(one, "O(1)") == pn.cell_class("h1")))
    law = pn.theory.law
    for a in range(-span, span + 1):
        for b in range(-span, span + 1):
            tensor = B.eval_series(law.series, [pn.c1(f"O({a})"), pn.c1(f"O({b})")])
            out.append((f"{pn.name}: (FGL) O({a})xO({b})", tensor == pn.c1(f"O({a + b})")))
    out.append((f"{pn.name}: (A5) L x O = L", pn.tensor_matrix(pn.c1("O(1)"), pn.c1("O(0)")) == pn.c1("O(1)")))
    return out


def check_product(xy: B.CellSpace) -> Results:
    x, y = xy.factors
    extra = [f"p1*{s}" for s in _pn_bundles(x)[:2]] + [f"p2*{s}" for s in _pn_bundles(y)[:2]]
    out = check_space(xy, extra)
    law = xy.theory.law
    if xy.dim:
        # (FGL) for bundles mixing both factors
        for a, b, c, d in [(1, 0, 0, 1), (1, 1, 1, -1), (2, -1, -1, 1)]:
            lhs = B.eval_series(law.series, [xy.c1(f"O({a},{b})"), xy.c1(f"O({c},{d})")])
            out.append((f"{xy.name}: (FGL) O({a},{b})xO({c},{d})", lhs == xy.c1(f"O({a + c},{b + d})")))
    # (A8) c1(p1*L)(a x b) = c1(L)(a) x b, and the same on the second factor
    ok = True
    for ca in x.cells:
        for cb in y.cells:
            a, b = x.cell_class(ca.id), y.cell_class(cb.id)
            ab = B.external_product(a, b, xy)
            if B.c1_apply(ab, "p1*O(1)") != B.external_product(B.c1_apply(a, "O(1)"), b, xy):
                ok = False
            if B.c1_apply(ab, "p2*O(1)") != B.external_product(a, B.c1_apply(b, "O(1)"), xy):
                ok = False
    out.append((f"{xy.name}: (A8)", ok))
    if xy.dim and x.dim and y.dim:
        pt = B.external_product(x.cell_class(f"h{x.dim}"), y.cell_class(f"h{y.dim}"), xy)
        word = xy.c1("p1*O(1)") ** x.dim @ xy.c1("p2*O(1)") ** y.dim
        out.append((f"{xy.name}: bidegree shift to the point", word(xy.unit()) == pt))
    return out


def check_pbundle(pe: B.CellSpace) -> Results:
    out = check_space(pe, ["q*O(2)"])
    E = pe.bundle
    r = E.rank
    xi = pe.c1("xi")
    q = B.bundle_projection(pe)
    # monic relation sum_i (-1)^i xi^(r-i) q^* c~_i = 0 on every pulled-back cell
    chern = [B.chern_class(E, i) for i in range(r + 1)]
    ok = True
    for cell in pe.base.cells:
        b = pe.base.cell_class(cell.id)
        acc = None
        for i in range(r + 1):
            term = (xi ** (r - i))(B.pull_back(q, chern[i](b))).scale((-1) ** i)
            acc = term if acc is None else acc + term
        ok = ok and acc.is_zero()
    out.append((f"{pe.name}: Chern relation", ok))
    out.append((f"{pe.name}: (Sect) xi(1)", B.c1_apply(pe.unit(), "xi") == pe.cell_class(f"xi1|{pe.base.top_cell.id}") if r > 1 else True))
    out.append((f"{pe.name}: q^* 1 = 1", B.pull_back(q, pe.base.unit()) == pe.unit()))
    # (A4) along q
    for s in pe.base.generators + ["O(2)", "O(-1)"]:
        out.append((
            f"{pe.name}: (A4) q with {s}",
            pe.c1(f"q*{s}") @ q.pull_matrix == q.pull_matrix @ pe.base.c1(s),
        ))
    out.append((f"{pe.name}: euler = top chern", B.euler_class(E) == B.chern_class(E, r)))
    return out


def check_maps(theory: B.OrientedTheory, max_n: int = 4) -> Results:
    out: Results = []
    pns = [B.projective_space(n, theory) for n in range(max_n + 1)]
    # (A3) projection formula along linear embeddings
    for k in range(max_n + 1):
        for n in range(k, max_n + 1):
            f = B.linear_embedding(pns[k], pns[n])
            for m in (-1, 1, 2):
                L = f"O({m})"
                lhs = f.push_matrix @ pns[k].c1(f.pulled_back_symbol(L))
                rhs = pns[n].c1(L) @ f.push_matrix
                out.append((f"(A3) P{k}->P{n} with {L}", lhs == rhs))
            # functoriality of push-forward
            for j in range(k, n + 1):
                g1 = B.linear_embedding(pns[k], pns[j])
                g2 = B.linear_embedding(pns[j], pns[n])
                out.append((f"(A1) push P{k}->P{j}->P{n}", B.compose(g1, g2).push_matrix == f.push_matrix))
    # smooth maps: projections and structure maps
    for a in range(max_n + 1):
        for b in range(max_n + 1):
            if a + b > max_n + 1:
                continue
            xy = B.product(pns[a], pns[b])
            for which in (1, 2):
                p = B.projection(xy, which)
                tgt = p.target
                for s in ("O(1)", "O(2)"):
                    out.append((
                        f"(A4) p{which}:{xy.name} with {s}",
                        xy.c1(p.pulled_back_symbol(s)) @ p.pull_matrix == p.pull_matrix @ tgt.c1(s),
                    ))
            # (A1) for pull-backs: X x Y -> X -> pt equals X x Y -> pt
            p1 = B.projection(xy, 1)
            via = B.compose(p1, B.structure_map(pns[a]))
            out.append((f"(A1) pull {xy.name}->P{a}->pt", via.pull_matrix == B.structure_map(xy).pull_matrix))
            out.append((f"(A1) identity on {xy.name}", B.identity_map(xy).pull_matrix @ p1.pull_matrix == p1.pull_matrix))
    # (A2) base change: P^k -> P^n proper, P^n x P^m -> P^n smooth
    for k in range(max_n):
        for n in range(k, max_n):
            for m in range(0, max_n - n + 1):
                f = B.linear_embedding(pns[k], pns[n])
                z = B.product(pns[n], pns[m])
                g = B.projection(z, 1)
                w = B.product(pns[k], pns[m])
                f2 = B.product_map(f, B.identity_map(pns[m]), w, z)
                g2 = B.projection(w, 1)
                out.append((
                    f"(A2) P{k}->P{n} along P{n}xP{m}",
                    g.pull_matrix @ f.push_matrix == f2.push_matrix @ g2.pull_matrix,
                ))
    # (A6) external products and push-forward; (A7) and pull-back
    for k1, n1, k2, n2 in [(0, 1, 1, 2), (1, 2, 0, 2), (1, 3, 2, 2), (0, 2, 1, 1)]:
        f = B.linear_embedding(pns[k1], pns[n1])
        g = B.linear_embedding(pns[k2], pns[n2])
        fg = B.product_map(f, g)
        ok = all(
            B.push_forward(fg, B.external_product(pns[k1].cell_class(a.id), pns[k2].cell_class(b.id), fg.source))
            == B.external_product(B.push_forward(f, pns[k1].cell_class(a.id)), B.push_forward(g, pns[k2].cell_class(b.id)), fg.target)
            for a in pns[k1].cells
            for b in pns[k2].cells
        )
        out.append((f"(A6) P{k1}->P{n1} x P{k2}->P{n2}", ok))
        out.append((
            f"(A3) {fg.name} with p1*O(1)",
            fg.push_matrix @ fg.source.c1("p1*O(1)") == fg.target.c1("p1*O(1)") @ fg.push_matrix,
        ))
    for a, b in [(1, 1), (2, 1), (0, 2)]:
        f = B.structure_map(pns[a])
        g = B.projection(B.product(pns[b], pns[1]), 1)
        fg = B.product_map(f, g)
        ok = all(
            B.pull_back(fg, B.external_product(f.target.cell_class(x.id), g.target.cell_class(y.id), fg.target))
            == B.external_product(B.pull_back(f, f.target.cell_class(x.id)), B.pull_back(g, g.target.cell_class(y.id)), fg.source)
            for x in f.target.cells
            for y in g.target.cells
        )
        out.append((f"(A7) {fg.name}", ok))
    # point inclusion and structure map
    for n in range(max_n + 1):
        out.append((f"point class on P{n}", B.push_forward(B.point_inclusion(pns[n]), pns[0].unit()) == pns[n].cell_class(f"h{n}")))
    return out


def check_pbundle_maps(theory: B.OrientedTheory) -> Results:
    out: Results = []
    p2 = B.projective_space(2, theory)
    pe = B.projective_bundle(B.SplitBundle(p2, ("O(0)", "O(1)", "O(2)")))
    q = B.bundle_projection(pe)
    # (A1): P(E) -> P2 -> pt equals the structure map of P(E)
    via = B.compose(q, B.structure_map(p2))
    out.append(("(A1) pull P(E)->P2->pt", via.pull_matrix == B.structure_map(pe).pull_matrix))
    # (A7) with a bundle projection factor
    p1 = B.projective_space(1, theory)
    fg = B.product_map(B.structure_map(p1), q)
    ok = all(
        B.pull_back(fg, B.external_product(fg.target.factors[0].cell_class(x.id), p2.cell_class(y.id), fg.target))
        == B.external_product(p1.unit(), B.pull_back(q, p2.cell_class(y.id)), fg.source)
        for x in fg.target.factors[0].cells
        for y in p2.cells
    )
    out.append(("(A7) P1->pt x P(E)->P2", ok))
    return out


def model_axioms(theory: B.OrientedTheory, max_n: int = 4, max_rank: int = 3) -> Results:
    pns, products, pbundles = _spaces(theory, max_n, max_rank)
    out: Results = []
    for pn in pns:
        out += check_pn(pn)
    for xy in products:
        out += check_product(xy)
    for pe in pbundles:
        out += check_pbundle(pe)
    out += check_maps(theory, max_n)
    out += check_pbundle_maps(theory)
    return out
