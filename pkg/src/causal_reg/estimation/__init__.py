"""Moments, risk functionals and the causal regularization estimator."""

from causal_reg.estimation.estimator import (
    FitResult,
    RegularizationPath,
    fit,
    fit_on_datasets,
    fit_path,
)
from causal_reg.estimation.lambdas import (
    INF,
    Infinity,
    LambdaValue,
    check_grid,
    default_grid,
    format_lambda,
    lambda_as_float,
    lambda_key,
    parse_lambda,
)
from causal_reg.estimation.moments import (
    EnvMoments,
    MomentSummary,
    compute_moments,
    empirical_risk,
    regularizer_norm_hat,
    regularizer_norm_hat_sqrt,
    risk_diff_hat,
    risk_sum_hat,
)

__all__ = [
    "INF",
    "EnvMoments",
    "FitResult",
    "Infinity",
    "LambdaValue",
    "MomentSummary",
    "RegularizationPath",
    "check_grid",
    "compute_moments",
    "default_grid",
    "empirical_risk",
    "fit",
    "fit_on_datasets",
    "fit_path",
    "format_lambda",
    "lambda_as_float",
    "lambda_key",
    "parse_lambda",
    "regularizer_norm_hat",
    "regularizer_norm_hat_sqrt",
    "risk_diff_hat",
    "risk_sum_hat",
]
