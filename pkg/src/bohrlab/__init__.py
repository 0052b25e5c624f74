"""Majorant series, Bohr radii of l_p balls, and the numerics around them."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    bound_report,
    final_prob_bound,
    lower_bound_B,
    lower_bound_K,
    random_bound,
    stir_bound_B,
    stir_bound_K,
    tree_solve,
    upper_bound_B,
    upper_bound_K,
)
from .estimator import EstimateConfig, EstimateReport, estimate, radius_of_candidate
from .multiindex import (
    BallSpec,
    MultiIndex,
    SparsePolynomial,
    enumerate_multiindices,
    evaluate,
    majorant,
    monomial_sup,
    multinomial,
)
from .randpoly import (
    SignTensor,
    SupEstimate,
    draw_sign_tensor,
    implied_upper_bound,
    multilinear_eval,
    sup_norm_estimate,
    to_homogeneous,
)
from .univariate import (
    UnivariateSeries,
    bohr_radius_1d,
    caratheodory_check,
    majorant_sum,
    moebius_coeffs,
    wiener_average,
    wintner_h2_bound,
    wintner_objective,
)
