"""The causal regularization estimator β̂λ and its regularization path.

β̂λ minimizes ½R̂pred(β) + (λ/2)·R̂norm(β). Its normal equations are

    (Ĝ⁺ + λ·clip(Ĝ))·β = Ẑ⁺ + λ·P·Ẑ,   P = clip(Ĝ)·clip(Ĝ)^g,

so λ = 0 is pooled OLS and λ = ∞ is the minimum-norm causal Dantzig
clip(Ĝ)^g·Ẑ. When the system matrix is singular at tolerance the
minimum-norm solution is returned and the result is flagged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import structlog
from numpy.typing import NDArray

from causal_reg.errors import SingularSystem
from causal_reg.estimation.lambdas import INF, LambdaValue, check_grid, parse_lambda
from causal_reg.estimation.moments import MomentSummary, compute_moments
from causal_reg.linalg import SymMatrix, numerical_rank, pinv_psd, solve_spd
from causal_reg.models import EnvPair
from causal_reg.parallel import ordered_map

log = structlog.get_logger("estimator")


@dataclass(frozen=True, eq=False)
class FitResult:
    """One point of the regularization path."""

    lam: LambdaValue
    coef: NDArray[np.float64]
    rank_deficient: bool = False


@dataclass(frozen=True, eq=False)
class RegularizationPath:
    lambdas: list[LambdaValue]
    coefs: list[NDArray[np.float64]]
    rank_deficient: list[bool]

    def __len__(self) -> int:
        return len(self.lambdas)

    def as_matrix(self) -> NDArray[np.float64]:
        """Coefficients stacked as (len(lambdas), p)."""
        return np.vstack(self.coefs)


def fit(m: MomentSummary, lam: LambdaValue, rank_tol: float | None = None) -> FitResult:
    """β̂λ for a single λ (finite or INF)."""
    lam = parse_lambda(lam)
    g = m.g_diff_psd
    g_pinv = m.g_diff_pinv if rank_tol is None else pinv_psd(g, rank_tol=rank_tol, clip_tol=np.inf)

    if lam is INF:
        coef = g_pinv.entries @ m.z_diff
        deficient = numerical_rank(g, rank_tol) < m.p
        if deficient:
            log.debug("fit_rank_deficient", lam="inf", rank=numerical_rank(g, rank_tol), p=m.p)
        return FitResult(lam=INF, coef=coef, rank_deficient=deficient)

    lam = float(lam)
    if lam == 0.0:
        system = m.g_plus_psd
        rhs = m.z_plus
    else:
        projector = g.entries @ g_pinv.entries
        system = SymMatrix.from_array(m.g_plus_psd.entries + lam * g.entries)
        rhs = m.z_plus + lam * (projector @ m.z_diff)

    try:
        coef = solve_spd(system, rhs, rank_tol=rank_tol)
        return FitResult(lam=lam, coef=coef, rank_deficient=False)
    except SingularSystem:
        log.debug("fit_rank_deficient", lam=lam, p=m.p)
        coef = pinv_psd(system, rank_tol=rank_tol, clip_tol=np.inf).entries @ rhs
        return FitResult(lam=lam, coef=coef, rank_deficient=True)


def fit_path(
    m: MomentSummary,
    lambdas: Sequence[object],
    rank_tol: float | None = None,
    threads: int = 1,
) -> RegularizationPath:
    """β̂λ for every λ of a strictly increasing grid; identical for any thread count."""
    grid = check_grid(lambdas)
    fits = ordered_map(lambda lam: fit(m, lam, rank_tol), grid, threads)
    return RegularizationPath(
        lambdas=grid,
        coefs=[f.coef for f in fits],
        rank_deficient=[f.rank_deficient for f in fits],
    )


def fit_on_datasets(
    pair: EnvPair,
    lam: LambdaValue,
    clip_tol: float = np.inf,
    rank_tol: float | None = None,
) -> FitResult:
    return fit(compute_moments(pair, clip_tol=clip_tol), lam, rank_tol)
