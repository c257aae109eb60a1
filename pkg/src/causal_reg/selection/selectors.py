"""λ selectors over a fitted grid.

Every selector shares the same fold fits: β̂λ is fitted on the training
part of each assignment, then scored per fold. The sample selector scores
|R̂ₑ(test) − R̂ₒ(test)|, the population selector scores the true Rdiff, the
S-optimal selector takes the argmin per fold, and the optimal selector
scores fits on the whole sample. Ties go to the largest λ.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import structlog
from numpy.typing import NDArray

from causal_reg.errors import InvalidInput
from causal_reg.estimation import (
    LambdaValue,
    RegularizationPath,
    check_grid,
    compute_moments,
    fit_path,
    risk_diff_hat,
)
from causal_reg.models import EnvPair
from causal_reg.parallel import ordered_map
from causal_reg.population import PopulationQuantities, compute_population, population_rdiff
from causal_reg.selection.plans import FoldAssignment, ResamplingPlan
from causal_reg.sem import NoiseSpec, SemStructure, ShiftSpec

log = structlog.get_logger("selection")

FoldScore = Callable[["FoldFit", NDArray[np.float64]], float]


@dataclass(frozen=True, eq=False)
class FoldFit:
    """The regularization path fitted on one assignment's training data."""

    test: EnvPair
    path: RegularizationPath


@dataclass(frozen=True, eq=False)
class SelectorResult:
    grid: list[LambdaValue]
    chosen_lambda: LambdaValue
    loss_curve: NDArray[np.float64]
    per_fold_losses: NDArray[np.float64]
    per_fold_chosen: list[LambdaValue]
    criterion: str

    @property
    def chosen_index(self) -> int:
        return self.grid.index(self.chosen_lambda)

    def loss_at(self, lam: LambdaValue) -> float:
        """The averaged criterion at a grid value."""
        return float(self.loss_curve[self.grid.index(lam)])


def argmin_largest(values: NDArray[np.float64]) -> int:
    """Index of the minimum; among exact ties the last (largest λ)."""
    return int(np.flatnonzero(values == values.min())[-1])


def fit_folds(
    pair: EnvPair,
    grid: Sequence[object],
    plan: ResamplingPlan,
    clip_tol: float = np.inf,
    rank_tol: float | None = None,
    threads: int = 1,
) -> list[FoldFit]:
    """Fit the path on every training part, in plan order."""
    plan.check_fits(pair)
    lambdas = check_grid(grid)

    def one(assignment: FoldAssignment) -> FoldFit:
        train = assignment.train(pair)
        m = compute_moments(train, clip_tol=clip_tol)
        path = fit_path(m, lambdas, rank_tol=rank_tol)
        if any(path.rank_deficient):
            log.debug("fold_rank_deficient", count=sum(path.rank_deficient))
        return FoldFit(test=assignment.test(pair), path=path)

    return ordered_map(one, plan.assignments, threads)


def _loss_matrix(fits: list[FoldFit], score: FoldScore) -> NDArray[np.float64]:
    return np.array([[score(f, coef) for coef in f.path.coefs] for f in fits], dtype=np.float64)


def _average(losses: NDArray[np.float64]) -> NDArray[np.float64]:
    # fsum is exactly rounded, so fold order cannot change the curve
    return np.array([math.fsum(col) for col in losses.T]) / losses.shape[0]


def _select(
    grid: list[LambdaValue],
    losses: NDArray[np.float64],
    criterion: str,
) -> SelectorResult:
    curve = _average(losses)
    chosen = grid[argmin_largest(curve)]
    log.info("lambda_selected", criterion=criterion, chosen=str(chosen), folds=losses.shape[0])
    return SelectorResult(
        grid=grid,
        chosen_lambda=chosen,
        loss_curve=curve,
        per_fold_losses=losses,
        per_fold_chosen=[grid[argmin_largest(row)] for row in losses],
        criterion=criterion,
    )


def _sample_score(f: FoldFit, coef: NDArray[np.float64]) -> float:
    return abs(risk_diff_hat(f.test, coef))


def _population_score(pq: PopulationQuantities) -> FoldScore:
    return lambda _f, coef: population_rdiff(pq, coef)


def _population(
    structure: SemStructure,
    shift: ShiftSpec,
    noise: NoiseSpec | None,
    pq: PopulationQuantities | None,
) -> PopulationQuantities:
    return pq if pq is not None else compute_population(structure, noise, shift)


def sample_selector(
    pair: EnvPair,
    grid: Sequence[object],
    plan: ResamplingPlan,
    *,
    fits: list[FoldFit] | None = None,
    clip_tol: float = np.inf,
    rank_tol: float | None = None,
    threads: int = 1,
) -> SelectorResult:
    """argmin over λ of E_S|R̂ₑ(test) − R̂ₒ(test)| at β̂λ fitted on training data."""
    lambdas = check_grid(grid)
    fits = fits if fits is not None else fit_folds(pair, lambdas, plan, clip_tol, rank_tol, threads)
    return _select(lambdas, _loss_matrix(fits, _sample_score), "sample")


def population_selector(
    structure: SemStructure,
    shift: ShiftSpec,
    pair: EnvPair,
    grid: Sequence[object],
    plan: ResamplingPlan,
    *,
    noise: NoiseSpec | None = None,
    pq: PopulationQuantities | None = None,
    fits: list[FoldFit] | None = None,
    clip_tol: float = np.inf,
    rank_tol: float | None = None,
    threads: int = 1,
) -> SelectorResult:
    """argmin over λ of E_S Rdiff(β̂λ), the fits scored by the true risk difference."""
    lambdas = check_grid(grid)
    pq = _population(structure, shift, noise, pq)
    fits = fits if fits is not None else fit_folds(pair, lambdas, plan, clip_tol, rank_tol, threads)
    return _select(lambdas, _loss_matrix(fits, _population_score(pq)), "population")


def s_optimal_selector(
    structure: SemStructure,
    shift: ShiftSpec,
    pair: EnvPair,
    grid: Sequence[object],
    plan: ResamplingPlan,
    *,
    noise: NoiseSpec | None = None,
    pq: PopulationQuantities | None = None,
    fits: list[FoldFit] | None = None,
    clip_tol: float = np.inf,
    rank_tol: float | None = None,
    threads: int = 1,
) -> SelectorResult:
    """Per-fold argmin of Rdiff(β̂λ).

    per_fold_chosen holds each fold's own minimizer; chosen_lambda is the
    most frequent of them, ties toward the larger λ.
    """
    base = population_selector(
        structure, shift, pair, grid, plan,
        noise=noise, pq=pq, fits=fits, clip_tol=clip_tol, rank_tol=rank_tol, threads=threads,
    )
    counts = Counter(base.grid.index(lam) for lam in base.per_fold_chosen)
    top = max(counts.values())
    modal = max(i for i, c in counts.items() if c == top)
    return SelectorResult(
        grid=base.grid,
        chosen_lambda=base.grid[modal],
        loss_curve=base.loss_curve,
        per_fold_losses=base.per_fold_losses,
        per_fold_chosen=base.per_fold_chosen,
        criterion="s_optimal",
    )


def optimal_selector(
    structure: SemStructure,
    shift: ShiftSpec,
    pair: EnvPair,
    grid: Sequence[object],
    *,
    noise: NoiseSpec | None = None,
    pq: PopulationQuantities | None = None,
    clip_tol: float = np.inf,
    rank_tol: float | None = None,
) -> SelectorResult:
    """argmin over λ of Rdiff(β̂λ) with β̂λ fitted on the whole sample."""
    lambdas = check_grid(grid)
    pq = _population(structure, shift, noise, pq)
    path = fit_path(compute_moments(pair, clip_tol=clip_tol), lambdas, rank_tol=rank_tol)
    losses = np.array([[population_rdiff(pq, coef) for coef in path.coefs]])
    return _select(lambdas, losses, "optimal")


def s_optimal_gap(sample: SelectorResult, s_optimal: SelectorResult) -> float:
    """E_S[θ_S(λ̂_sample) − θ_S(λ_S)] from selectors evaluated on common fits."""
    if sample.grid != s_optimal.grid:
        raise InvalidInput("selector results were computed on different grids")
    losses = s_optimal.per_fold_losses
    if losses.shape[0] != sample.per_fold_losses.shape[0]:
        raise InvalidInput("selector results were computed on different plans")
    j = sample.chosen_index
    gaps = [
        row[j] - row[s_optimal.grid.index(lam)]
        for row, lam in zip(losses, s_optimal.per_fold_chosen)
    ]
    return float(np.mean(gaps))
