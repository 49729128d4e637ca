"""Exact positive- and negative-base numeration systems.

Expansions in base beta (Renyi) and base -beta (Ito-Sadahiro) computed with
exact arithmetic in Q(beta), admissibility in the lexicographic and
alternate orders, Ito-Sadahiro polynomials, and base classification.
"""

from .exact_numbers import Poly, PolyParseError, parse_poly
from .expansions import (
    DEFAULT_CAP,
    DomainError,
    EPWord,
    Finiteness,
    Inconclusive,
    System,
    d_neg_l,
    d_star_neg_r,
    d_star_pos_one,
    expand,
    expand_any,
    is_finite_neg,
    orbit,
    word_value,
)
from .kernels import BACKEND
from .lattices import (
    FinVerdict,
    LatticePoint,
    closure_sample,
    enumerate_neg,
    enumerate_pos,
    fin_membership,
    gap_alphabet,
)
from .number_field import BaseError, BaseSpec, FieldElem, Relation
from .orders import alt_compare, is_admissible_neg, is_admissible_pos, lex_compare
from .spectra import ClassificationReport, Verdict, build_is_poly, classify, scan

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BaseError", "BaseSpec", "ClassificationReport", "DEFAULT_CAP", "DomainError",
    "EPWord", "FieldElem", "FinVerdict", "Finiteness", "Inconclusive", "LatticePoint", "Poly",
    "PolyParseError", "Relation", "System", "Verdict", "alt_compare", "build_is_poly", "classify",
    "closure_sample", "d_neg_l", "d_star_neg_r", "d_star_pos_one", "enumerate_neg", "enumerate_pos",
    "expand", "expand_any", "fin_membership", "gap_alphabet", "is_admissible_neg",
    "is_admissible_pos", "is_finite_neg", "lex_compare", "orbit", "parse_poly", "scan", "word_value",
]
