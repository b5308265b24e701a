"""Skew-C symmetric operators on C^n: classification, trace duality,
distances and hyperreflexivity quantities."""

__version__ = "0.1.0"

from .conjugation import (
    Conjugation,
    apply_conjugation,
    block_conjugation,
    block_decompose,
    conjugate_operator,
    flip_conjugation,
    make_conjugation,
    plain_conjugation,
    random_conjugation,
    real_form_basis,
    split_parts,
    symmetry_class,
)
from .duality import (
    algebra_generated,
    alpha,
    annihilator_element,
    distance_to_skew,
    hyperreflexivity_ratios,
    preannihilator,
    reflexivity_check,
    structured_basis,
    trace_pair,
)
from .numerics import matrix_norms, orthonormalize, quad_form_sup, rank_one_search, takagi

__all__ = [
    "Conjugation",
    "algebra_generated",
    "alpha",
    "annihilator_element",
    "apply_conjugation",
    "block_conjugation",
    "block_decompose",
    "conjugate_operator",
    "distance_to_skew",
    "flip_conjugation",
    "hyperreflexivity_ratios",
    "make_conjugation",
    "matrix_norms",
    "orthonormalize",
    "plain_conjugation",
    "preannihilator",
    "quad_form_sup",
    "random_conjugation",
    "rank_one_search",
    "real_form_basis",
    "reflexivity_check",
    "split_parts",
    "structured_basis",
    "symmetry_class",
    "takagi",
    "trace_pair",
]
