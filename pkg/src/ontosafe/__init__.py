"""Safe reasoning over weighted ontologies.

Parse relation/metadata files, compute guarded-inference closures, decide
whether a relation subset can derive designated sensitive facts, enumerate
minimal support sets, and pick maximum-weight safe sub-ontologies (greedy,
matroid-intersection heuristic, or exact oracle).
"""

from .inference import (
    CapExceededError,
    SafetyReport,
    closure,
    closure_with_supports,
    compile_rules,
    is_safe,
    minimal_support_sets,
    reachability_closure,
)
from .matroids import (
    DirectSumMatroid,
    ExplicitMatroid,
    Matroid,
    PartitionMatroid,
    SetFamilyOracle,
    check_matroid_axioms,
    forbidden_set_matroid,
    greedy_max_weight,
)
from .model import (
    MetadataRule,
    Ontology,
    OntologyParseError,
    Triple,
    minimize_family,
    parse_minsets,
    parse_ontology,
    parse_sensitive,
    render_fact,
    serialize,
)
from .oracle import (
    EnvelopeExceededError,
    exact_hitting_set,
    exhaustive_max_common_independent,
)
from .reduction import ReducedInstance, build_reduction, extract_selection
from .solver import (
    AugmentingTree,
    BorderGraph,
    SanitizeResult,
    SolveParams,
    apply_augmentation,
    build_border_graph,
    find_augmenting_tree,
    intersect_two_exact,
    sanitize,
    solve_three,
    two_matroid_augmenting_path,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentingTree",
    "BorderGraph",
    "CapExceededError",
    "DirectSumMatroid",
    "EnvelopeExceededError",
    "ExplicitMatroid",
    "Matroid",
    "MetadataRule",
    "Ontology",
    "OntologyParseError",
    "PartitionMatroid",
    "ReducedInstance",
    "SafetyReport",
    "SanitizeResult",
    "SetFamilyOracle",
    "SolveParams",
    "Triple",
    "apply_augmentation",
    "build_border_graph",
    "build_reduction",
    "check_matroid_axioms",
    "closure",
    "closure_with_supports",
    "compile_rules",
    "exact_hitting_set",
    "exhaustive_max_common_independent",
    "extract_selection",
    "find_augmenting_tree",
    "forbidden_set_matroid",
    "greedy_max_weight",
    "intersect_two_exact",
    "is_safe",
    "minimal_support_sets",
    "minimize_family",
    "parse_minsets",
    "parse_ontology",
    "parse_sensitive",
    "reachability_closure",
    "render_fact",
    "sanitize",
    "serialize",
    "solve_three",
    "two_matroid_augmenting_path",
    "__version__",
]
