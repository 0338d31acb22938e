"""First homology of finite-index subgroups of finitely presented groups.

Fox calculus, permutation representations and integer Smith normal form,
with a search for index-2 subgroups whose abelianization has no Z_2 summand.
"""

from .covers import (PermRep, Permutation, cover_chain_h1, enumerate_index2_reps,
                     find_two_avoiding_index2, fox_hempel_matrix, parse_rep, perm_matrix,
                     reidemeister_schreier, subgroup_h1_fox, subgroup_h1_rs, theta_eval,
                     validate_rep)
from .families import FamilyInstance, build, one_relator_h1, paper_theta, scan_family
from .foxcalc import GroupRingElement, fox_derivative, fox_jacobian
from .intlinalg import (AbelianGroup, IntMatrix, abelian_group_from_presentation_matrix,
                        invariant_factors_via_minors, is_two_avoiding, smith_normal_form,
                        subtract_free_rank)
from .presentation import Presentation, Word, free_reduce, parse_presentation

__version__ = "0.1.0"

__all__ = [
    "PermRep",
    "Permutation",
    "cover_chain_h1",
    "enumerate_index2_reps",
    "find_two_avoiding_index2",
    "fox_hempel_matrix",
    "parse_rep",
    "perm_matrix",
    "reidemeister_schreier",
    "subgroup_h1_fox",
    "subgroup_h1_rs",
    "theta_eval",
    "validate_rep",
    "FamilyInstance",
    "build",
    "one_relator_h1",
    "paper_theta",
    "scan_family",
    "GroupRingElement",
    "fox_derivative",
    "fox_jacobian",
    "AbelianGroup",
    "IntMatrix",
    "abelian_group_from_presentation_matrix",
    "invariant_factors_via_minors",
    "is_two_avoiding",
    "smith_normal_form",
    "subtract_free_rank",
    "Presentation",
    "Word",
    "free_reduce",
    "parse_presentation",
]
