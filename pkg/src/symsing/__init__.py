"""symsing: a desk-scale laboratory for the singularity of random
symmetric sign matrices over prime fields.

Exhaustive enumeration, counter-based sampling, exact linear algebra
over Z_q and over the integers, character-sum evaluation of atom
probabilities, and the combinatorial structure theory (level sets,
surviving-pair counts, cancellation graphs) that feeds the analytic
error bound.  Hot loops run in a compiled extension when available and
fall back to numpy otherwise; see ``symsing._kernels``.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import GuardError, RejectionSamplingError
from .matrices import (
    ProbabilityEstimate,
    ResidueVector,
    RngStream,
    SignMatrix,
    enumerate_symmetric,
    exact_event_probability,
    is_odd_prime,
    mat_vec_mod_q,
    next_valid_modulus,
    sample_symmetric,
    validate_modulus,
)
from .linalg import (
    RankResult,
    det_integer,
    is_singular,
    kernel_vectors,
    rank_mod_q,
)
from .structure import (
    AuxiliaryGraph,
    LevelSetProfile,
    PairCountReport,
    PropositionCheck,
    build_auxiliary_graph,
    check_proposition,
    default_threshold,
    is_triangle_free,
    level_set_profile,
    pair_count,
)
from .fourier import (
    AnalyticBoundResult,
    CharacterSumResult,
    ErrorTermResult,
    analytic_error_bound,
    cos_decay_check,
    error_term,
    prob_fourier,
    structured_family_log_weight,
)
from .experiments import (
    DEFAULT_SEED,
    ErrorBoundTable,
    ExactEnumerationResult,
    KernelStats,
    LemmaReport,
    MarkovReport,
    PropsReport,
    run_error_bound_table,
    run_exact_p,
    run_expected_kernel,
    run_markov_report,
    run_mc_p,
    run_verify_lemma,
    run_verify_props,
)

__all__ = [
    "BACKEND",
    "DEFAULT_SEED",
    "GuardError",
    "RejectionSamplingError",
    "SignMatrix",
    "ResidueVector",
    "RngStream",
    "ProbabilityEstimate",
    "enumerate_symmetric",
    "sample_symmetric",
    "mat_vec_mod_q",
    "exact_event_probability",
    "is_odd_prime",
    "validate_modulus",
    "next_valid_modulus",
    "RankResult",
    "rank_mod_q",
    "det_integer",
    "is_singular",
    "kernel_vectors",
    "LevelSetProfile",
    "PairCountReport",
    "AuxiliaryGraph",
    "PropositionCheck",
    "default_threshold",
    "level_set_profile",
    "pair_count",
    "build_auxiliary_graph",
    "is_triangle_free",
    "check_proposition",
    "CharacterSumResult",
    "ErrorTermResult",
    "AnalyticBoundResult",
    "prob_fourier",
    "error_term",
    "cos_decay_check",
    "analytic_error_bound",
    "structured_family_log_weight",
    "ExactEnumerationResult",
    "KernelStats",
    "MarkovReport",
    "LemmaReport",
    "PropsReport",
    "ErrorBoundTable",
    "run_exact_p",
    "run_mc_p",
    "run_expected_kernel",
    "run_markov_report",
    "run_verify_lemma",
    "run_verify_props",
    "run_error_bound_table",
]
