"""Exact computations with plane polynomial automorphisms.

Modules: :mod:`algebra` (sparse rational polynomials), :mod:`planemap`
(composition, Jacobian, Jung-van der Kulk factorization), :mod:`inverse`
(formal inverse of ``Y + Z U(Y)^b``), :mod:`triangular` (triangular
polynomials and the top-coefficient solver), :mod:`family` (degeneration
families) and :mod:`cli`.
"""

from .algebra import MultiPoly, VarTable, u_poly, poly_in_y
from .planemap import PlaneMap, compose, decompose, jacobian, limit_mod_Z, dimension, preceq
from .textio import parse_poly, format_poly

__all__ = [
    "MultiPoly", "VarTable", "u_poly", "poly_in_y",
    "PlaneMap", "compose", "decompose", "jacobian", "limit_mod_Z", "dimension", "preceq",
    "parse_poly", "format_poly",
]
