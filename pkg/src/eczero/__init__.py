"""eczero: desk-scale toolkit for anomalous primes of CM elliptic curves,
p-adic point decompositions and curve-family surveys."""

from .arith import cornacchia, is_prime, kronecker_symbol, sqrt_mod_p
from .errors import (
    DomainError,
    EczeroError,
    IngestError,
    InternalConsistencyError,
    NonSimpleRootError,
    NoSolutionError,
    PrecisionExhaustedError,
    SplitHypothesisError,
    UnsupportedModulusError,
)
from .fp import (
    FpCurve,
    FpPoint,
    OrdinaryClass,
    count_points,
    fp_add,
    fp_neg,
    fp_scalar_mul,
    is_anomalous,
    ordinary_class,
    trace_of_frobenius,
)
from .localpoints import (
    Decomposition,
    QpPoint,
    decompose_point,
    embed_point,
    formal_layer_point,
    lift_p_torsion,
    qp_add,
    qp_neg,
    qp_scalar_mul,
    reduce_point,
    t_parameter,
)
from .padic import PadicNumber, newton_lift, padic_add, padic_div, padic_mul
from .quadfields import (
    CLASS_NUMBER_ONE_DISCS,
    FrobeniusPair,
    ImagQuadField,
    anomalous_primes,
    anomalous_residues_d3,
    frobenius_candidates,
    splits_completely,
)
from .rational import (
    Curve,
    QPoint,
    ReductionKind,
    ReductionType,
    division_polynomial,
    minimal_at_p,
    naive_point_search,
    reduction_type,
)
from .survey import FamilySpec, SurveyRow, emit_report, ingest_curves, scan_family
from .verdicts import (
    AdmissibilityConfig,
    AdmissibilityResult,
    Conclusion,
    HypothesisRecord,
    Verdict,
    brauer_middle_term_verdict,
    cm_tower_verdict,
    divisibility_verdict,
    global_lift_verdict,
    nd_structure_verdict,
    prime_admissibility,
    quartic_verdict,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityConfig",
    "AdmissibilityResult",
    "CLASS_NUMBER_ONE_DISCS",
    "Conclusion",
    "Curve",
    "Decomposition",
    "DomainError",
    "EczeroError",
    "FamilySpec",
    "FpCurve",
    "FpPoint",
    "FrobeniusPair",
    "HypothesisRecord",
    "ImagQuadField",
    "IngestError",
    "InternalConsistencyError",
    "NoSolutionError",
    "NonSimpleRootError",
    "OrdinaryClass",
    "PadicNumber",
    "PrecisionExhaustedError",
    "QPoint",
    "QpPoint",
    "ReductionKind",
    "ReductionType",
    "SplitHypothesisError",
    "SurveyRow",
    "UnsupportedModulusError",
    "Verdict",
    "anomalous_primes",
    "anomalous_residues_d3",
    "brauer_middle_term_verdict",
    "cm_tower_verdict",
    "cornacchia",
    "count_points",
    "decompose_point",
    "division_polynomial",
    "divisibility_verdict",
    "embed_point",
    "emit_report",
    "formal_layer_point",
    "fp_add",
    "fp_neg",
    "fp_scalar_mul",
    "frobenius_candidates",
    "global_lift_verdict",
    "ingest_curves",
    "is_anomalous",
    "is_prime",
    "kronecker_symbol",
    "lift_p_torsion",
    "minimal_at_p",
    "naive_point_search",
    "nd_structure_verdict",
    "newton_lift",
    "ordinary_class",
    "padic_add",
    "padic_div",
    "padic_mul",
    "prime_admissibility",
    "qp_add",
    "qp_neg",
    "qp_scalar_mul",
    "quartic_verdict",
    "reduce_point",
    "reduction_type",
    "scan_family",
    "splits_completely",
    "sqrt_mod_p",
    "t_parameter",
    "trace_of_frobenius",
]
