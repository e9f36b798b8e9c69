"""The Lazard ring, degree by degree.

The coefficients of the universal law satisfy the associativity
relations; what remains is free of rank p(n) in degree n.
"""

from cobcalc.fgl import multiplicative
from cobcalc.lazard import build, classifying_map, universal

L = build(6)
print("degree  monomials  rank")
for row in L.rank_table():
    print(f"{row['degree']:>6}  {row['monomials']:>9}  {row['quotient_rank']:>4}")

print()
print("relations in degree 3:")
for r in L.relations_of_degree(3):
    print("  ", r)

U = universal(4)
print()
print("universal law to order 4:")
print("  ", U.series)

theta = classifying_map(build(5), multiplicative(6))
print()
print("the multiplicative law is classified by")
for name, img in theta.to_json().items():
    print(f"   {name} -> {img}")
