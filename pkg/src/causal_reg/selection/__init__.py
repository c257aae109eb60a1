"""Resampling plans and λ selectors."""

from causal_reg.selection.plans import FoldAssignment, ResamplingPlan, make_split, make_vfold
from causal_reg.selection.selectors import (
    FoldFit,
    SelectorResult,
    argmin_largest,
    fit_folds,
    optimal_selector,
    population_selector,
    s_optimal_gap,
    s_optimal_selector,
    sample_selector,
)

__all__ = [
    "FoldAssignment",
    "FoldFit",
    "ResamplingPlan",
    "SelectorResult",
    "argmin_largest",
    "fit_folds",
    "make_split",
    "make_vfold",
    "optimal_selector",
    "population_selector",
    "s_optimal_gap",
    "s_optimal_selector",
    "sample_selector",
]
