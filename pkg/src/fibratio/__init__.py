"""Weighted n-generalized Fibonacci sequences and their ratio limits.

Generation (exact Gaussian-rational or renormalized float), dominant
characteristic-root analysis, sufficient simplicity criteria, ratio-limit
estimation, empirical audits of the ratio-limit claims, and OEIS
signature verification.
"""

__version__ = "0.1.0"

from .audit import (
    BatchConfig,
    ClaimEvidence,
    audit_part_i,
    audit_part_ii,
    batch_audit,
)
from .criteria import CriterionResult, dubeau_check, dubeau_lhs, ostrowski_check
from .errors import (
    FibratioError,
    InsufficientTerms,
    NetworkUnavailable,
    NoConvergence,
    ParseError,
    RejectedLastWeightZero,
    RejectedLength,
    RejectedOrder,
    RejectedTrivial,
    RootModulusZero,
    ZeroRunBoundViolated,
)
from .oeis import OeisClient, OeisEntry, VerificationRecord
from .ratio import (
    Condition11Report,
    DegeneracyReport,
    RatioEstimate,
    RatioOptions,
    condition_11_estimate,
    decompose_via_fundamental,
    degeneracy_check,
    estimate_ratio_limit,
    limit_expression,
)
from .roots import (
    DominanceReport,
    MonicPolynomial,
    RootSet,
    characteristic_polynomial,
    classify_dominance,
    exact_multiplicity_structure,
    find_roots,
)
from .scalars import ExactComplex, format_scalar, parse_scalar
from .sequences import (
    InitialConditions,
    Recurrence,
    SequenceWindow,
    ZeroRunReport,
    fundamental_initial_conditions,
    generate,
    new_initial_conditions,
    new_recurrence,
    shift_to_nonzero_head,
    zero_run_stats,
)
