"""Bootstrap confidence intervals."""

from causal_reg.bootstrap.interval import (
    BootstrapResult,
    bootstrap_worst_risk_ci,
    empirical_quantile,
    interval_from_draws,
)

__all__ = [
    "BootstrapResult",
    "bootstrap_worst_risk_ci",
    "empirical_quantile",
    "interval_from_draws",
]
