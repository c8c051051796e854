"""Extreme L_p discrepancy of weighted point sets.

Exact engines for p = 2, even integer p and p = inf, a deterministic
chunked Monte Carlo estimator for every finite p, the closed-form dual
machinery (worst-case integrands, splines, extremal representers), curse
constants with certified lower bounds, and reference point generators.
"""

from .bounds import (
    BMethod,
    Certificate,
    CurseConstants,
    RatioDiagnostics,
    certificate_lower_bound,
    curse_base,
    curse_base_closed_form,
    curse_constants,
    envelope,
    envelope_stationary_point,
    envelope_tilde,
    envelope_tilde_peak,
    error_lower_bound,
    gnewuch_linf_upper,
    integral_ratio_max,
    log_curvature_at_half,
    min_points_lower_bound,
    norm_ratio,
    norm_ratio_max,
    nw10_l2_lower,
    ratio_diagnostics,
)
from .core import (
    CHUNK,
    BoxPair,
    BudgetExceededError,
    DiscrepancyResult,
    InternalConsistencyError,
    InvalidInputError,
    Method,
    PointSet,
    WeightKind,
    WeightSet,
    classify_weights,
    equal_weights,
    load_points,
    local_discrepancy,
    points_csv,
    sample_box_pair,
    sample_box_pairs,
    save_points,
    substream,
)
from .dual import (
    DualityCheck,
    HolderPair,
    box_operator_1d,
    conjugate_exponent,
    duality_gap_mc,
    extremal_representer,
    initial_error,
    representer_value,
    spline_eval,
    spline_integral,
    spline_norm,
    worst_case_1d,
    worst_case_nd,
)
from .engines import (
    CellDecomposition,
    extreme_l2_exact,
    extreme_linf_exact,
    extreme_linf_lower_mc,
    extreme_lp_exact_even_p,
    extreme_lp_mc,
)
from .generators import GeneratorKind, GeneratorSpec, generate, radical_inverse

__all__ = [
    "BMethod",
    "BoxPair",
    "BudgetExceededError",
    "CHUNK",
    "CellDecomposition",
    "Certificate",
    "CurseConstants",
    "DiscrepancyResult",
    "DualityCheck",
    "GeneratorKind",
    "GeneratorSpec",
    "HolderPair",
    "InternalConsistencyError",
    "InvalidInputError",
    "Method",
    "PointSet",
    "RatioDiagnostics",
    "WeightKind",
    "WeightSet",
    "box_operator_1d",
    "certificate_lower_bound",
    "classify_weights",
    "conjugate_exponent",
    "curse_base",
    "curse_base_closed_form",
    "curse_constants",
    "duality_gap_mc",
    "envelope",
    "envelope_stationary_point",
    "envelope_tilde",
    "envelope_tilde_peak",
    "equal_weights",
    "error_lower_bound",
    "extremal_representer",
    "extreme_l2_exact",
    "extreme_linf_exact",
    "extreme_linf_lower_mc",
    "extreme_lp_exact_even_p",
    "extreme_lp_mc",
    "generate",
    "gnewuch_linf_upper",
    "initial_error",
    "integral_ratio_max",
    "load_points",
    "local_discrepancy",
    "log_curvature_at_half",
    "min_points_lower_bound",
    "norm_ratio",
    "norm_ratio_max",
    "nw10_l2_lower",
    "points_csv",
    "radical_inverse",
    "ratio_diagnostics",
    "representer_value",
    "sample_box_pair",
    "sample_box_pairs",
    "save_points",
    "spline_eval",
    "spline_integral",
    "spline_norm",
    "substream",
    "worst_case_1d",
    "worst_case_nd",
]
