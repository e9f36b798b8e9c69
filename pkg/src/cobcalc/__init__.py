"""Formal group law calculus and cellular models of algebraic cobordism."""

__version__ = "0.1.0"
