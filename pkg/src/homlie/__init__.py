"""Exact symbolic workbench for Hom-Lie algebras and their one-parameter deformations."""

from .deform import (
    Deformation,
    ExpansionReport,
    expand_all,
    expand_hom_jacobi,
    expand_jacobi,
    untwist,
    vanishing_constraints,
    yau_twist,
)
from .errors import InputError
from .exprparse import parse_poly, tokenize
from .homalg import (
    Basis,
    BracketConstants,
    HomAlgebra,
    LinMap,
    Vec,
    bracket_eval,
    check_hom_jacobi,
    generic_bracket,
    generic_map,
    hom_jacobiator,
    jacobiator,
    sl2,
)
from .linsolve import LinearSystem, SolutionSpace, linearize, solve, substitute_solution, systems_equivalent
from .symcore import MultiPoly, PolyMatrix, PolySeries, Registry

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "bracket_eval",
    "BracketConstants",
    "check_hom_jacobi",
    "Deformation",
    "expand_all",
    "expand_hom_jacobi",
    "expand_jacobi",
    "ExpansionReport",
    "generic_bracket",
    "generic_map",
    "hom_jacobiator",
    "HomAlgebra",
    "InputError",
    "jacobiator",
    "linearize",
    "LinearSystem",
    "LinMap",
    "MultiPoly",
    "parse_poly",
    "PolyMatrix",
    "PolySeries",
    "Registry",
    "sl2",
    "SolutionSpace",
    "solve",
    "substitute_solution",
    "systems_equivalent",
    "tokenize",
    "untwist",
    "vanishing_constraints",
    "Vec",
    "yau_twist",
]
