"""Exact arithmetic substrate: rationals, quadratic fields, polynomials, cyclotomic integers, finite fields."""
from fractions import Fraction as Rat

from ._util import euler_phi, factorize, is_prime, units_mod
from .cyclotomic import CycInt, cyclotomic_poly
from .finitefield import Fq
from .poly import (
    Poly,
    coprime_refinement,
    poly_gcd,
    squarefree_decomposition,
    squarefree_part,
    valuation,
)
from .quadratic import QuadElem

__all__ = [
    "Rat",
    "QuadElem",
    "Poly",
    "CycInt",
    "Fq",
    "poly_gcd",
    "squarefree_decomposition",
    "squarefree_part",
    "coprime_refinement",
    "valuation",
    "cyclotomic_poly",
    "euler_phi",
    "factorize",
    "is_prime",
    "units_mod",
]
