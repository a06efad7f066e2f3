"""Finite quandles of twist-spun knots.

Builds finite knot quandles along two independent paths (presentation
completion and Alexander quandles over branched-cover groups), computes
their invariants, and classifies the twist spins with finite knot quandles.
"""

from .catalog import (Catalog, CatalogInstance, FamilyTags, KnotSpec, TwistSpinSpec,
                      braid_permutation, branched_twist_spin_quandle, builtin_catalog,
                      closure_components, cut_open_presentation, finite_family,
                      twist_spin_presentation, wirtinger_presentation)
from .classifier import Certificate, TripleReport, classify, triple_report
from .errors import (BudgetExceeded, CapExceeded, CatalogInconsistent, InvalidMonodromy,
                     NotAKnot, NotFound, OutsideCatalog, OutsideFiniteCatalog, ParseError,
                     QuandleForgeError)
from .groups import (FiniteGroup, GroupAutomorphism, GroupPresentation, automorphism_classes,
                     automorphism_order, automorphisms, check_group_axioms, cyclic_group,
                     element_order, format_group_table, group_from_permutations,
                     group_from_presentation, groups_isomorphic, parse_group_presentation,
                     parse_group_table, power)
from .presentations import (CompletionResult, CompletionStats, Gen, Op, QuandlePresentation,
                            QuandleTerm, add_type_relations, complete, format_term, parse,
                            simplify, substitute, term_generators)
from .quandles import (FiniteQuandle, QuandleInvariantProfile, ValidationResult,
                       dihedral_quandle, enumerate_quandles, find_monodromy, format_quandle_table,
                       galex, hom_count, inner_group_order, is_connected, isomorphic, orbits,
                       parse_quandle_table, profile, profile_json, trivial_quandle, type_of,
                       validate)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "CapExceeded", "Catalog", "CatalogInconsistent", "CatalogInstance",
    "Certificate", "CompletionResult", "CompletionStats", "FamilyTags", "FiniteGroup",
    "FiniteQuandle", "Gen", "GroupAutomorphism", "GroupPresentation", "InvalidMonodromy",
    "KnotSpec", "NotAKnot", "NotFound", "Op", "OutsideCatalog", "OutsideFiniteCatalog",
    "ParseError", "QuandleForgeError", "QuandleInvariantProfile", "QuandlePresentation",
    "QuandleTerm", "TripleReport", "TwistSpinSpec", "ValidationResult",
    "add_type_relations", "automorphism_classes", "automorphism_order", "automorphisms",
    "braid_permutation", "branched_twist_spin_quandle", "builtin_catalog",
    "check_group_axioms", "classify", "closure_components", "complete",
    "cut_open_presentation", "cyclic_group", "dihedral_quandle", "element_order",
    "enumerate_quandles", "find_monodromy", "finite_family", "format_group_table",
    "format_quandle_table", "format_term", "galex", "group_from_permutations",
    "group_from_presentation", "groups_isomorphic", "hom_count", "inner_group_order",
    "is_connected", "isomorphic", "orbits", "parse", "parse_group_presentation",
    "parse_group_table", "parse_quandle_table", "power", "profile", "profile_json",
    "simplify", "substitute", "term_generators", "triple_report", "trivial_quandle",
    "twist_spin_presentation", "type_of", "validate", "wirtinger_presentation",
]
