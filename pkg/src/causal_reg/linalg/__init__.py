"""Symmetric-matrix kernels: eigendecomposition, PSD square root, pseudo-inverse, SPD solve."""

from causal_reg.linalg.kernels import (
    DEFAULT_CLIP_TOL,
    SymMatrix,
    as_sym,
    clip_psd,
    default_rank_tol,
    numerical_rank,
    pinv_psd,
    psd_sqrt,
    range_projector,
    solve_spd,
    sym_eigen,
)

__all__ = [
    "DEFAULT_CLIP_TOL",
    "SymMatrix",
    "as_sym",
    "clip_psd",
    "default_rank_tol",
    "numerical_rank",
    "pinv_psd",
    "psd_sqrt",
    "range_projector",
    "solve_spd",
    "sym_eigen",
]
