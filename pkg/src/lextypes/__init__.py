"""Solver and verifier for finite lexicographic type structures."""

from .epistemic import (
    RcbrTrace,
    cautious_belief_operator,
    cautiously_believed_at_level,
    cautiously_believes,
    cautiously_rational,
    iterate_assumption,
    rcbr_iterate,
    strategy_projection,
)
from .harness import (
    GenParams,
    InvarianceReport,
    duplicate_type,
    equivalent_variant,
    gen_structure,
    merge_types,
    transport_check,
    verify_invariance,
)
from .hierarchy import (
    HierarchyPartition,
    HierarchyTerm,
    Morphism,
    TaggedType,
    explicit_hierarchy,
    find_morphism,
    hierarchy_equivalent,
    refine,
    stable_partition,
)
from .io import Instance, parse_instance, read_instance, serialize_instance
from .lex import Order, best_replies, is_cautious, lex_compare, lex_expected_payoffs, optimal_under
from .model import Event, Game, Lps, Measure, TypeStructure, marginal_lps, product_event, validate_structure

__version__ = "0.1.0"
