"""Exact arithmetic: graded sparse polynomials and integer lattices."""

from .intmat import (
    IntegerMatrix,
    LatticeReduction,
    invariant_factors,
    lattice_normal_form,
    smith_normal_form,
)
from .poly import QQ, ZZ, Poly, PolyRing, Variable, poly_from_json

__all__ = [
    "IntegerMatrix",
    "LatticeReduction",
    "Poly",
    "PolyRing",
    "QQ",
    "Variable",
    "ZZ",
    "invariant_factors",
    "lattice_normal_form",
    "poly_from_json",
    "smith_normal_form",
]


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Dispatch ``add``/``sub``/``mul`` on two polynomials."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")
