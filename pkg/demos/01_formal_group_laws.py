"""A tour of formal group laws: inverse, n-series, logarithm.

Run with ``python3 demos/01_formal_group_laws.py``.
"""

from cobcalc.exactalg import QQ
from cobcalc.fgl import additive, multiplicative

F = multiplicative(6)
print("F(u, v)      =", F.series)
print("validation   :", "ok" if F.validate().ok else "failed")

# the formal inverse is the geometric series in beta
print("chi(u)       =", F.chi)
print("F(u, -_F v)  =", F.minus)

for n in (2, 3, -2):
    print(f"[{n}]_F(u)     =", F.n_series(n))

# three lines meeting: the multi-sum packs all intersections into one series
print("[1]u1 + [1]u2 + [1]u3 =", F.multi_sum([1, 1, 1]))

# over the rationals the law becomes additive after a change of coordinate
FQ = multiplicative(6, QQ)
print("log(u)       =", FQ.log)
print("exp(t)       =", FQ.exp)
print("additive law =", additive(6).series)
