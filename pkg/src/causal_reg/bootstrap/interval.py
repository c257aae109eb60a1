"""Bootstrap confidence interval for the risk difference of a selected model.

λ̂* is chosen once on the training part of the split. Each replicate then
resamples the test observations with replacement, independently per
environment at the original sizes, refits β̂λ̂* on the resample and records
|R̂ₑᵇ − R̂ₒᵇ| on that same resample.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from causal_reg.errors import ConfigError, DegenerateResample, InvalidInput
from causal_reg.estimation import LambdaValue, check_grid, fit_on_datasets, parse_lambda, risk_diff_hat
from causal_reg.models import EnvPair
from causal_reg.parallel import ordered_map
from causal_reg.rng import make_rng
from causal_reg.selection import ResamplingPlan, sample_selector

log = structlog.get_logger("bootstrap")


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    alpha: float
    lower: float
    upper: float
    draws: NDArray[np.float64]
    chosen_lambda: LambdaValue

    @property
    def level(self) -> float:
        return 1.0 - self.alpha

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def covers(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def empirical_quantile(draws: ArrayLike, q: float) -> float:
    """Order statistic ⌈q·B⌉ (clamped to 1..B) of the draws."""
    if not 0.0 <= q <= 1.0:
        raise InvalidInput(f"quantile level must lie in [0, 1], got {q}")
    arr = np.asarray(draws, dtype=np.float64)
    if arr.size == 0:
        raise InvalidInput("no draws")
    return float(np.quantile(arr, q, method="inverted_cdf"))


def interval_from_draws(draws: ArrayLike, alpha: float) -> tuple[float, float]:
    """Empirical α/2 and 1 − α/2 quantiles."""
    return empirical_quantile(draws, alpha / 2.0), empirical_quantile(draws, 1.0 - alpha / 2.0)


def _replicate(
    test: EnvPair,
    lam: LambdaValue,
    seed: int,
    index: int,
    clip_tol: float,
    rank_tol: float | None,
) -> float:
    rng = make_rng(seed, index)
    n_e, n_o = test.sizes
    if min(n_e, n_o) < 2:
        raise DegenerateResample(f"test sets of sizes {(n_e, n_o)} cannot be resampled")
    idx_e = rng.integers(0, n_e, size=n_e)
    idx_o = rng.integers(0, n_o, size=n_o)
    resampled = test.subset(idx_e, idx_o)
    coef = fit_on_datasets(resampled, lam, clip_tol=clip_tol, rank_tol=rank_tol).coef
    return abs(risk_diff_hat(resampled, coef))


def bootstrap_worst_risk_ci(
    pair: EnvPair,
    split: ResamplingPlan,
    grid: Sequence[object],
    selection_plan: ResamplingPlan | None,
    b: int,
    alpha: float,
    seed: int,
    *,
    fixed_lambda: object | None = None,
    clip_tol: float = np.inf,
    rank_tol: float | None = None,
    threads: int = 1,
) -> BootstrapResult:
    """(1 − α) interval for |Rₑ − Rₒ| at the selected λ.

    With *fixed_lambda* the selector is skipped and *selection_plan* may be None.
    """
    if b < 1:
        raise ConfigError(f"bootstrap needs b >= 1, got {b}")
    if not 0.0 < alpha <= 1.0:
        raise ConfigError(f"alpha must lie in (0, 1], got {alpha}")
    if len(split) != 1:
        raise InvalidInput(f"bootstrap needs a single split, got {len(split)} assignments")
    split.check_fits(pair)
    assignment = split.assignments[0]
    train, test = assignment.train(pair), assignment.test(pair)

    if fixed_lambda is not None:
        lam = parse_lambda(fixed_lambda)
    else:
        if selection_plan is None:
            raise ConfigError("a selection plan is required unless fixed_lambda is given")
        lam = sample_selector(
            train, check_grid(grid), selection_plan,
            clip_tol=clip_tol, rank_tol=rank_tol, threads=threads,
        ).chosen_lambda

    draws = np.array(
        ordered_map(
            lambda i: _replicate(test, lam, seed, i, clip_tol, rank_tol),
            range(b),
            threads,
        ),
        dtype=np.float64,
    )
    lower, upper = interval_from_draws(draws, alpha)
    log.info(
        "bootstrap_finished",
        b=b, alpha=alpha, chosen=str(lam), lower=lower, upper=upper,
    )
    return BootstrapResult(alpha=alpha, lower=lower, upper=upper, draws=draws, chosen_lambda=lam)
