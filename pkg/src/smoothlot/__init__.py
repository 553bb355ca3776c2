"""Smooth randomized selection: partial lotteries whose odds move gradually with scores.

Two mechanisms with tunable smoothness (a clipped linear rule and a top-k
softmax rule), exact-size sampling from marginals, reference baselines, ex
post validity repair, and the evaluation harness around them.
"""

from ._kernels import BACKEND, HAS_NUMBA
from .analysis import (
    PerturbationReport,
    SweepRow,
    TightnessReport,
    check_individual_fairness,
    default_smoothness_grid,
    metric_dp_marginal_bound,
    perturbation_search,
    regret,
    regret_lower_bound,
    regret_smoothness_sweep,
    regret_upper_bound_linear,
    softmax_regret_bound,
    synthetic_beta_reviews,
    tightness_profile,
    tightness_search,
)
from .baselines import ThresholdPolicy, randomized_response_rule, thresholded_lottery_marginals
from .clipped import (
    ClippedLinearResult,
    clipped_linear_marginals,
    find_intercept,
    lottery_pool,
    slope_from_smoothness,
)
from .core import (
    IntervalVector,
    ReviewMatrix,
    UtilitySpec,
    check_marginals,
    l11_distance,
    leave_one_out_intervals,
    lipschitz_constant,
    normalize_reviews,
    utility,
)
from .expost import (
    check_ex_post_valid,
    core_width_satisfied,
    dominance_pairs,
    min_weight_valid_subset,
    project_valid_marginals,
    valid_vertices,
)
from .sampling import systematic_sample, systematic_sample_batch
from .softmax import (
    gumbel_topk_sample,
    softmax_marginals_exact,
    softmax_marginals_mc,
    softmax_regret_mc,
    temperature_from_smoothness,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HAS_NUMBA",
    "ClippedLinearResult",
    "IntervalVector",
    "PerturbationReport",
    "ReviewMatrix",
    "SweepRow",
    "ThresholdPolicy",
    "TightnessReport",
    "UtilitySpec",
    "check_ex_post_valid",
    "check_individual_fairness",
    "check_marginals",
    "clipped_linear_marginals",
    "core_width_satisfied",
    "default_smoothness_grid",
    "dominance_pairs",
    "find_intercept",
    "gumbel_topk_sample",
    "l11_distance",
    "leave_one_out_intervals",
    "lipschitz_constant",
    "lottery_pool",
    "metric_dp_marginal_bound",
    "min_weight_valid_subset",
    "normalize_reviews",
    "perturbation_search",
    "project_valid_marginals",
    "randomized_response_rule",
    "regret",
    "regret_lower_bound",
    "regret_smoothness_sweep",
    "regret_upper_bound_linear",
    "slope_from_smoothness",
    "softmax_marginals_exact",
    "softmax_marginals_mc",
    "softmax_regret_bound",
    "softmax_regret_mc",
    "synthetic_beta_reviews",
    "systematic_sample",
    "systematic_sample_batch",
    "temperature_from_smoothness",
    "thresholded_lottery_marginals",
    "tightness_profile",
    "tightness_search",
    "utility",
    "valid_vertices",
]
