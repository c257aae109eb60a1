"""Finite-sample bounds."""

from causal_reg.bounds.formulas import (
    BoundInputs,
    bound_core,
    eta,
    normalized_excess_risk,
    phi,
    predicted_excess_risk,
    sample_risk_bound,
    worst_risk_bound,
)

__all__ = [
    "BoundInputs",
    "bound_core",
    "eta",
    "normalized_excess_risk",
    "phi",
    "predicted_excess_risk",
    "sample_risk_bound",
    "worst_risk_bound",
]
