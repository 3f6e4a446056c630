"""Capacity analysis toolkit for conditional disclosure of secrets.

Decide when an instance admits the extreme rate 1/2, synthesize the
optimal linear schemes, verify arbitrary linear schemes by exact matrix
ranks (cross-checkable against an exhaustive enumeration oracle), and
compute Shannon-type converse bounds by exact rational linear
programming.
"""

from .gf import (
    GfMatrix,
    left_kernel,
    rank,
    rowspace_intersection_basis,
    rowspace_intersection_dim,
    rref,
)
from .instance import (
    CdsInstance,
    DegenerateInstanceError,
    FeasibilityResult,
    InstanceFormatError,
    Partition,
    PathWitness,
    format_instance,
    half_rate_feasible,
    is_non_degenerate,
    normalize_degenerate,
    parse_instance,
    qualified_components,
    unqualified_components_within,
    unqualified_path,
)
from .scheme import (
    AlignmentReport,
    LinearScheme,
    RateReport,
    SchemeFormatError,
    VerificationReport,
    alignment_report,
    check_signal_alignment,
    format_scheme,
    noise_overlap_dim,
    parse_scheme,
    path_overlap_lower_bound,
    rate_report,
    verify_linear,
)
from .oracle import (
    BudgetError,
    DEFAULT_BUDGET,
    LemmaAuditReport,
    SchemeTable,
    check_correct,
    check_secure,
    joint_entropy,
    joint_rank,
    lemma_audit,
    tabulate,
)
from .synthesis import (
    InfeasibleInstanceError,
    SynthesisPlan,
    builtin_example1_instance,
    builtin_fig2_instance,
    builtin_fig2_scheme,
    builtin_instance,
    plan_synthesis,
    reduce_randomness,
    synthesize_half_rate,
)
from .simplex import LpSolution, solve_lp
from .entropy_lp import (
    Constraint,
    EntropyLp,
    ShannonBoundResult,
    build_entropy_lp,
    cds_constraints,
    dual_certificate,
    elemental_inequalities,
    lp_dump,
    shannon_bound,
    simplex_solve,
    verify_certificate,
)

__version__ = "0.1.0"
