"""Exact planar linkages with self-touching configurations.

Core model (linkages, configurations, extensions), signed overlap
annotations, combinatorial validity checks, corridor layer orders,
verified perturbation into nontouching position, canonical chain
placements, semialgebraic constraint emission, and slender adornments.
"""

from .annotations import (
    AnnotationMatrix,
    annotate,
    ord_value,
    overlap_length,
    strict_crossing,
)
from .adornments import (
    AdornedChain,
    Adornment,
    adorned_chain_to_linkage,
    is_strictly_slender,
    slender_failures,
    triangulate,
    validate_adornment,
)
from .chains import (
    CanonicalConfiguration,
    ChainShape,
    InterpolationResult,
    canonical_closed,
    canonical_open,
    classify_chain,
    convex_interpolate,
    turning_direction,
)
from .corridors import (
    Corridor,
    CorridorOrder,
    CorridorSegment,
    corridor_order,
    corridors,
    delta_bound,
)
from .document import (
    Document,
    Frame,
    SparseAnnotation,
    parse_linkage_file,
    resolve_annotations,
    write_document,
)
from .errors import (
    AdornmentError,
    AnnotationError,
    ChainError,
    CorridorError,
    DocumentError,
    LinkageError,
    LinkfoldError,
    PerturbationError,
    ValidationFailure,
)
from .linkage import (
    Configuration,
    Edge,
    ExtensionMap,
    Linkage,
    check_epsilon_related,
    configuration_membership,
    extend_split,
    is_nontouching,
    merged_vertex_partition,
    reduce,
)
from .perturb import (
    PerturbationResult,
    ProbeEntry,
    ProbeReport,
    convergence_probe,
    perturb,
)
from .rationals import (
    SqrtRational,
    exact_sqrt,
    format_rational,
    parse_rational,
    sqrt_lower_bound,
    sqrt_upper_bound,
)
from .semialgebra import (
    And,
    Atom,
    ConstraintSystem,
    EvalReport,
    Not,
    Or,
    Poly,
    TaggedAssert,
    emit_conf,
    emit_nconf,
    eval_system,
    parse_constraints,
    serialize,
)
from .svgrender import render_svg
from .validator import (
    CheckReport,
    MagnifiedView,
    Verdict,
    check_macroscopic,
    check_microscopic,
    check_well_annotated,
    check_well_ordered,
    magnified_views,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AdornedChain",
    "Adornment",
    "AdornmentError",
    "And",
    "AnnotationError",
    "AnnotationMatrix",
    "Atom",
    "CanonicalConfiguration",
    "ChainError",
    "ChainShape",
    "CheckReport",
    "Configuration",
    "ConstraintSystem",
    "Corridor",
    "CorridorError",
    "CorridorOrder",
    "CorridorSegment",
    "Document",
    "DocumentError",
    "Edge",
    "EvalReport",
    "ExtensionMap",
    "Frame",
    "InterpolationResult",
    "Linkage",
    "LinkageError",
    "LinkfoldError",
    "MagnifiedView",
    "Not",
    "Or",
    "PerturbationError",
    "PerturbationResult",
    "Poly",
    "ProbeEntry",
    "ProbeReport",
    "SparseAnnotation",
    "SqrtRational",
    "TaggedAssert",
    "ValidationFailure",
    "Verdict",
    "adorned_chain_to_linkage",
    "annotate",
    "canonical_closed",
    "canonical_open",
    "check_epsilon_related",
    "check_macroscopic",
    "check_microscopic",
    "check_well_annotated",
    "check_well_ordered",
    "classify_chain",
    "configuration_membership",
    "convergence_probe",
    "convex_interpolate",
    "corridor_order",
    "corridors",
    "delta_bound",
    "emit_conf",
    "emit_nconf",
    "eval_system",
    "exact_sqrt",
    "extend_split",
    "format_rational",
    "is_nontouching",
    "is_strictly_slender",
    "magnified_views",
    "merged_vertex_partition",
    "ord_value",
    "overlap_length",
    "parse_constraints",
    "parse_linkage_file",
    "parse_rational",
    "perturb",
    "reduce",
    "render_svg",
    "resolve_annotations",
    "serialize",
    "slender_failures",
    "sqrt_lower_bound",
    "sqrt_upper_bound",
    "strict_crossing",
    "triangulate",
    "turning_direction",
    "validate",
    "validate_adornment",
    "write_document",
]
