"""Associahedra and 2-associahedra as explicit graded posets.

Two interchangeable models at each level: stable planar trees vs interval
bracketings for K_r, stable tree-pairs vs 2-bracketings for W_n.  Both are
enumerated exhaustively, certified as abstract polytopes, and reconciled
against an independent brute-force oracle and a bundled reference table of
face vectors.
"""

from .bracketing import OneBracketing, nu, tau, validate_1bracketing
from .errors import BoundExceeded, FactorMismatch, ParseError, TwoAssocError, ValidationError
from .poset import GradedPoset, check_abstract_polytope, fiber_product, is_simple, isomorphic, poset_product
from .rrt import contraction_hom, dimension, enumerate_kr, enumerate_moves, gamma, validate_stable_rrt
from .structure import avatar, extract_subpair, forgetful_pi, gamma2T, gamma_decomposition, reverse_weights
from .treepair import (
    TreePair,
    collapse_to_kn,
    derive_coherence,
    enumerate_2moves,
    enumerate_wn,
    inflate_from_kn,
    top_pair,
    validate_tree_pair,
)
from .twobracketing import TwoBracket, TwoBracketing, oracle_enumerate, two_nu, two_tau, validate_2bracketing

__version__ = "0.1.0"

__all__ = [
    "BoundExceeded",
    "FactorMismatch",
    "GradedPoset",
    "OneBracketing",
    "ParseError",
    "TreePair",
    "TwoAssocError",
    "TwoBracket",
    "TwoBracketing",
    "ValidationError",
    "avatar",
    "check_abstract_polytope",
    "collapse_to_kn",
    "contraction_hom",
    "derive_coherence",
    "dimension",
    "enumerate_2moves",
    "enumerate_kr",
    "enumerate_moves",
    "enumerate_wn",
    "extract_subpair",
    "fiber_product",
    "forgetful_pi",
    "gamma",
    "gamma2T",
    "gamma_decomposition",
    "inflate_from_kn",
    "is_simple",
    "isomorphic",
    "nu",
    "oracle_enumerate",
    "poset_product",
    "reverse_weights",
    "tau",
    "top_pair",
    "two_nu",
    "two_tau",
    "validate_1bracketing",
    "validate_2bracketing",
    "validate_stable_rrt",
    "validate_tree_pair",
]
