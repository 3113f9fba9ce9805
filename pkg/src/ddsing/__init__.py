"""Singularity verdicts with certificates for diagonally dominant complex
matrices.

The analyzer classifies row dominance, permutes to block lower triangular
form, and decides each irreducible block: a strict row means nonsingular, an
all-weak block is singular exactly when its angle-equation system is
consistent.  Singular verdicts come with checkable certificates (unit-
modulus null vectors, a row-stochastic Markov split, a diagonal unitary
similarity onto the comparison matrix); a brute-force elimination oracle
provides independent ground truth.
"""
from .angles import (
    AngleAssignment,
    AngleSolve,
    ConsistencyReport,
    EdgeResidual,
    RealSignSolve,
    RealSignVector,
    angle_distance,
    normalize_assignment,
    solve_angle_system,
    solve_real_signs,
    wrap_angle,
)
from .certificates import (
    CertificateBundle,
    MarkovDecomposition,
    SingularCertificate,
    UnitaryWitness,
    b_matrix,
    certificate_bundle,
    extend_null_vector,
    left_null_vector,
    markov_decomposition,
    right_null_vector,
    singleton_certificate,
    unitary_witness,
)
from .digraph import (
    Digraph,
    FrobeniusForm,
    associated_digraph,
    frobenius_normal_form,
    is_strongly_connected,
    permute,
    strongly_connected_components,
    support_digraph,
)
from .errors import (
    DdsingError,
    DegenerateSupport,
    DimensionMismatch,
    NonPositiveWeight,
    NotApplicable,
    ParseError,
    PreconditionViolated,
    ResidualTooLarge,
    SingularDependentBlock,
    TooLarge,
    ZeroDiagonal,
)
from .exact import (
    analyze_exact,
    exact_balance_check,
    exact_classify_rows,
    exact_matrix,
    exact_scale_columns,
)
from .matio import (
    matrix_to_dict,
    parse_matrix,
    parse_weights,
    report_from_dict,
    report_json,
    report_text,
    report_to_dict,
)
from .matrix import (
    BalanceCheck,
    DominanceProfile,
    PolarSplit,
    RowClass,
    RowDominance,
    Tolerances,
    balance_check,
    classify_rows,
    comparison_matrix,
    diagonal_of,
    max_row_sum,
    polar_split,
    scale_columns,
)
from .oracle import (
    OracleResult,
    PlantedInstance,
    gen_fixture,
    gen_perturbed_instance,
    gen_singular_instance,
    rank_det_oracle,
)
from .verdict import (
    REASON_ANGLE_INCONSISTENT,
    REASON_DEPENDENT_BLOCK,
    REASON_STRICT_ROW,
    BlockVerdict,
    MatrixVerdict,
    analyze,
    block_verdict,
    nullity_of,
)

__version__ = "0.1.0"
