"""Fundamental classes of divisors with normal crossings.

Two lines in the plane: the multiplicative law puts a correction
``-beta`` on the point where they meet.
"""

from cobcalc import bmodel as B
from cobcalc.fgl import multiplicative
from cobcalc.snc import SNCDivisor, pushforward_to_ambient, snc_class, support_decomposition

MUL = B.OrientedTheory(multiplicative(8))

for J, g in support_decomposition(MUL.law, [1, 1]).items():
    print(f"G_{J} =", g)

P2 = B.projective_space(2, MUL)
E = SNCDivisor.hyperplanes(P2, [1, 1])
for term in snc_class(E).terms:
    print(f"face {term.J} (dim {term.dim}):", term.cls)

total = pushforward_to_ambient(E)
print("pushed into P2      :", total)
print("c1(O(2)) on [P2]    :", B.c1_apply(P2.unit(), "O(2)"))
