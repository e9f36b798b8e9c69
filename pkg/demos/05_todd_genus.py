"""The Todd genus from the logarithm of the multiplicative law.

With beta = 1 every projective space has genus 1, and a hypersurface
of degree d in P^n has genus 1 - (-1)^n binom(d-1, n).
"""

from math import comb

from cobcalc import bmodel as B
from cobcalc.exactalg import QQ
from cobcalc.fgl import multiplicative

TODD = B.OrientedTheory(multiplicative(10, QQ, beta=1))

print("[P^m]:", [str(B.projective_space_class(m, TODD)) for m in range(9)])

for n, d in [(2, 3), (3, 4), (4, 5)]:
    X = B.hypersurface_class(n, d, TODD)
    print(f"degree {d} in P{n}: genus {B.pushforward_to_point(X)}, expected {1 - (-1) ** n * comb(d - 1, n)}")
