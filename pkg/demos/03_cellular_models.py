"""Bordism classes on projective spaces, products and projective bundles."""

from cobcalc import bmodel as B
from cobcalc.fgl import multiplicative
from cobcalc.laws import theta
from cobcalc.lazard import universal

MUL = B.OrientedTheory(multiplicative(8))
UNI = B.OrientedTheory(universal(8))

P2 = B.projective_space(2, MUL)
print("cells of P2:", ", ".join(f"{c.id} = {c.word_str()}" for c in P2.cells))
for d in (1, 2, -1):
    print(f"c1(O({d})) on [P2] =", B.c1_apply(P2.unit(), f"O({d})"))

# a conic, first over the universal theory, then specialized
conic = B.hypersurface_class(2, 2, UNI)
print("universal conic      :", conic)
target = B.OrientedTheory(multiplicative(8))
print("multiplicative conic :", B.specialize(conic, theta(target.law, 7), target))

# on P1 x P1 the diagonal class meets each ruling once
Q = B.product(B.projective_space(1, MUL), B.projective_space(1, MUL))
diag = B.c1_apply(Q.unit(), "O(1,1)")
print("c1(O(1,1)) on P1xP1  :", diag)
print("its self-intersection:", B.intersection_product(diag, diag))

# a Hirzebruch surface as a projective bundle
E = B.SplitBundle(B.projective_space(1, MUL), ("O(0)", "O(1)"))
F1 = B.projective_bundle(E)
xi = F1.c1("xi")
print("xi^2 = c1(q*O(1)) xi :", xi @ xi == F1.c1("q*O(1)") @ xi)
