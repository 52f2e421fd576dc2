"""Finite-dimensional algebras of substitutions: transposition algebras and
substitution algebras with transpositions, with decision procedures,
representations, free algebras and interpolation."""

from .perm import SA, SAD, TA, Transformation, SubstWord, hat, decompose, compose
from .terms import Signature, parse_term, parse_equation, parse_formula, parse_quasi_equation

__all__ = [
    "SA", "SAD", "TA", "Transformation", "SubstWord", "hat", "decompose", "compose",
    "Signature", "parse_term", "parse_equation", "parse_formula", "parse_quasi_equation",
]
