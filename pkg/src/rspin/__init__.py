"""Exact computation of r-spin intersection numbers.

The package solves the W-constraints for the r-spin partition function by
a graded recursion in exact arithmetic over Q(sqrt(-r)), extracts the
intersection numbers from the log of the result, and verifies every
checkable identity (constraint residuals, string/dilaton equations,
grading, selection rule) with zero tolerance.
"""

from .correlator import (
    CorrelatorRecord,
    Insertion,
    conversion_constant,
    exp_graded,
    extract_correlators,
    insertion_for_index,
    log_tau,
    selection_check,
    variable_index,
)
from .errors import (
    CacheError,
    ContextError,
    ContractError,
    ExtractionError,
    InvalidIndexError,
    InvalidInsertionError,
    InvalidModeError,
    InvalidSpecError,
    ParseError,
    RSpinError,
)
from .scalar import QScalar
from .serialize import FORMAT_VERSION, TauCache, parse_tau, serialize_tau
from .solver import TauExpansion, compute_tau, compute_tau_exponential, mode_bound
from .tpoly import TMonomial, TPolynomial
from .verify import (
    CheckReport,
    check_commutators,
    check_exponential_agreement,
    check_gradings,
    check_selection,
    check_string_dilaton,
    check_w_constraints,
)
from .walgebra import (
    BetaIndex,
    NormalTerm,
    WModeSpec,
    apply_beta,
    apply_raising_operator,
    apply_w_mode,
    w_mode_terms,
)

__version__ = "0.1.0"

__all__ = [
    "BetaIndex",
    "CacheError",
    "CheckReport",
    "ContextError",
    "ContractError",
    "CorrelatorRecord",
    "ExtractionError",
    "FORMAT_VERSION",
    "Insertion",
    "InvalidIndexError",
    "InvalidInsertionError",
    "InvalidModeError",
    "InvalidSpecError",
    "NormalTerm",
    "ParseError",
    "QScalar",
    "RSpinError",
    "TMonomial",
    "TPolynomial",
    "TauCache",
    "TauExpansion",
    "WModeSpec",
    "apply_beta",
    "apply_raising_operator",
    "apply_w_mode",
    "check_commutators",
    "check_exponential_agreement",
    "check_gradings",
    "check_selection",
    "check_string_dilaton",
    "check_w_constraints",
    "compute_tau",
    "compute_tau_exponential",
    "conversion_constant",
    "exp_graded",
    "extract_correlators",
    "insertion_for_index",
    "log_tau",
    "mode_bound",
    "parse_tau",
    "selection_check",
    "serialize_tau",
    "variable_index",
    "w_mode_terms",
]
