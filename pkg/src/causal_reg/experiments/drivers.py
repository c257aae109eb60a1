"""Simulation studies on a configured SEM.

Each (n, replication) cell draws its data from seeds derived from the master
seed and the cell's keys, so cells run in any order or thread count with
identical rows.
"""

from __future__ import annotations

from typing import Literal, Sequence

import numpy as np
import structlog

from causal_reg.bootstrap import bootstrap_worst_risk_ci
from causal_reg.bounds import BoundInputs, bound_core, normalized_excess_risk, predicted_excess_risk
from causal_reg.estimation import (
    INF,
    compute_moments,
    empirical_risk,
    fit,
    lambda_as_float,
    risk_diff_hat,
    risk_sum_hat,
)
from causal_reg.experiments.context import RunContext, Stream
from causal_reg.experiments.plotting import PlotSpec
from causal_reg.experiments.registry import Experiment, register
from causal_reg.experiments.results import ResultRow, ResultTable, with_aggregates
from causal_reg.models import EnvPair
from causal_reg.parallel import ordered_map
from causal_reg.population import (
    compute_population,
    population_beta_lambda,
    population_rdiff,
    population_worst_risk,
)
from causal_reg.selection import sample_selector
from causal_reg.sem import ShiftSpec, sample_sem

log = structlog.get_logger("experiments")

MIN_REPLICATIONS = 10

# (per-replication metric, how, summary metric)
Aggregate = tuple[str, Literal["mean", "median"], str]

CONVERGENCE_AGGREGATES: list[Aggregate] = [
    ("abs_normalized_excess_risk", "mean", "mean_abs_normalized_excess_risk"),
    ("normalized_excess_risk", "mean", "mean_normalized_excess_risk"),
    ("predicted_excess_risk", "mean", "mean_predicted_excess_risk"),
]
COVERAGE_AGGREGATES: list[Aggregate] = [
    ("covered", "mean", "coverage"),
    ("width", "median", "median_width"),
]


def oos_aggregates(scales: Sequence[float]) -> list[Aggregate]:
    """Medians over replications of the normalized out-of-sample risks and their ratio."""
    out: list[Aggregate] = [("chosen_lambda", "median", "median_chosen_lambda")]
    for scale in scales:
        out += [
            (f"normalized_oos_risk_cv@{scale:g}", "median", f"median_normalized_oos_risk_cv@{scale:g}"),
            (f"normalized_oos_risk_dantzig@{scale:g}", "median", f"median_normalized_oos_risk_dantzig@{scale:g}"),
            (f"oos_ratio@{scale:g}", "median", f"median_oos_ratio@{scale:g}"),
        ]
    return out


def _cells(ctx: RunContext) -> list[tuple[int, int]]:
    exp = ctx.config.experiment
    if exp.replications < MIN_REPLICATIONS:
        log.warning("few_replications", replications=exp.replications, minimum=MIN_REPLICATIONS)
    return [(n, r) for n in exp.sample_sizes for r in range(exp.replications)]


def _collect(
    ctx: RunContext,
    name: str,
    per_cell,
    aggregates: Sequence[Aggregate] = (),
    by: Sequence[str] = ("n",),
) -> ResultTable:
    cells = _cells(ctx)
    log.info("experiment_started", experiment=name, cells=len(cells), threads=ctx.threads)
    rows = [row for chunk in ordered_map(per_cell, cells, ctx.threads) for row in chunk]
    table = with_aggregates(ResultTable.from_rows(ctx.config.run_id, rows), name, aggregates, by)
    log.info("experiment_finished", experiment=name, rows=len(table))
    return table


@register
class Convergence(Experiment):
    """Normalized excess risk of β̂λ against its φ-based prediction as n grows."""

    name = "convergence"
    plot = PlotSpec(
        metric="abs_normalized_excess_risk",
        by_lambda=False,
        ylabel="|normalized excess risk|",
    )

    def run(self, ctx: RunContext) -> ResultTable:
        exp = ctx.config.experiment
        pq = compute_population(ctx.structure, ctx.noise, ctx.shift)

        def cell(key: tuple[int, int]) -> list[ResultRow]:
            n, r = key
            pair = ctx.simulate(n, n, n, r)
            beta = fit(compute_moments(pair), exp.lam).coef
            sup = population_worst_risk(pq, beta, exp.tau)
            core = bound_core(risk_sum_hat(pair, beta), risk_diff_hat(pair, beta), exp.tau)
            excess = normalized_excess_risk(beta, sup, core, exp.tau)
            predicted = predicted_excess_risk(BoundInputs.from_pair(pair, ctx.config.bounds.q))
            return [
                ResultRow(self.name, r, n, exp.lam, "normalized_excess_risk", excess),
                ResultRow(self.name, r, n, exp.lam, "abs_normalized_excess_risk", abs(excess)),
                ResultRow(self.name, r, n, exp.lam, "predicted_excess_risk", predicted),
            ]

        return _collect(ctx, self.name, cell, CONVERGENCE_AGGREGATES, by=("n", "lambda"))


def convergence_slope(table: ResultTable) -> float:
    """Least-squares slope of log mean |normalized excess risk| against log n."""
    summary = table.metric("mean_abs_normalized_excess_risk").sort_values("n")
    return float(np.polyfit(np.log(summary["n"]), np.log(summary["value"]), 1)[0])


@register
class Coverage(Experiment):
    """Bootstrap interval coverage of the population risk difference."""

    name = "coverage"
    plot = PlotSpec(metric="width", how="median", by_lambda=False, logy=False, ylabel="interval width")

    def run(self, ctx: RunContext) -> ResultTable:
        cfg = ctx.config
        pq = compute_population(ctx.structure, ctx.noise, ctx.shift)
        fixed = cfg.bootstrap.lam

        def cell(key: tuple[int, int]) -> list[ResultRow]:
            n, r = key
            pair = ctx.simulate(n, n, n, r)
            split = ctx.bootstrap_split(n, n, n, r)
            plan = None
            if fixed is None:
                n_e, n_o = split.assignments[0].train(pair).sizes
                plan = ctx.selection_plan(n_e, n_o, n, r)
            result = bootstrap_worst_risk_ci(
                pair, split, ctx.grid, plan, cfg.bootstrap.b, cfg.bootstrap.alpha,
                ctx.seed(Stream.BOOTSTRAP, n, r, 1), fixed_lambda=fixed,
                clip_tol=cfg.estimation.clip_tol, rank_tol=cfg.estimation.rank_tol,
            )
            lam = result.chosen_lambda
            target = population_rdiff(pq, population_beta_lambda(pq, lam))
            return [
                ResultRow(self.name, r, n, lam, "lower", result.lower),
                ResultRow(self.name, r, n, lam, "upper", result.upper),
                ResultRow(self.name, r, n, lam, "width", result.width),
                ResultRow(self.name, r, n, lam, "target", target),
                ResultRow(self.name, r, n, lam, "covered", float(result.covers(target))),
            ]

        return _collect(ctx, self.name, cell, COVERAGE_AGGREGATES)


def _oos_rows(
    ctx: RunContext,
    experiment: str,
    n: int,
    r: int,
    pair: EnvPair,
    folds: int | None = None,
) -> list[ResultRow]:
    """CV-selected β̂ and causal Dantzig scored on large shifted test sets."""
    cfg = ctx.config
    m = compute_moments(pair, clip_tol=cfg.estimation.clip_tol)
    plan = ctx.selection_plan(*pair.sizes, n, r, folds=folds)
    selected = sample_selector(
        pair, ctx.grid, plan, clip_tol=cfg.estimation.clip_tol, rank_tol=cfg.estimation.rank_tol,
    )
    chosen = selected.chosen_lambda
    beta_cv = fit(m, chosen, cfg.estimation.rank_tol).coef
    beta_cd = fit(m, INF, cfg.estimation.rank_tol).coef

    rows = [
        ResultRow(experiment, r, n, None, "chosen_lambda", lambda_as_float(chosen)),
        ResultRow(experiment, r, n, None, "chosen_index", float(selected.chosen_index)),
    ]
    for k, scale in enumerate(cfg.experiment.oos_shift_scales):
        test = sample_sem(
            ctx.structure, ctx.noise, ctx.shift.scaled(scale), cfg.experiment.test_n,
            ctx.seed(Stream.TEST, n, r, k),
        )
        risk_cv = empirical_risk(test, beta_cv)
        risk_cd = empirical_risk(test, beta_cd)
        rows += [
            ResultRow(experiment, r, n, None, f"oos_risk_cv@{scale:g}", risk_cv),
            ResultRow(experiment, r, n, None, f"oos_risk_dantzig@{scale:g}", risk_cd),
            ResultRow(experiment, r, n, None, f"oos_ratio@{scale:g}", risk_cv / risk_cd),
            # risk per unit of out-of-sample shift
            ResultRow(experiment, r, n, None, f"normalized_oos_risk_cv@{scale:g}", risk_cv / scale),
            ResultRow(experiment, r, n, None, f"normalized_oos_risk_dantzig@{scale:g}", risk_cd / scale),
        ]
    return rows


@register
class Compare(Experiment):
    """Cross-validated causal regularization against the causal Dantzig out of sample."""

    name = "compare"

    def plot_spec(self, ctx: RunContext) -> PlotSpec | None:
        scale = ctx.config.experiment.oos_shift_scales[0]
        return PlotSpec(
            metric=f"oos_ratio@{scale:g}", how="median", by_lambda=False, logy=False,
            ylabel="CV risk / Dantzig risk",
        )

    def run(self, ctx: RunContext) -> ResultTable:
        def cell(key: tuple[int, int]) -> list[ResultRow]:
            n, r = key
            return _oos_rows(ctx, self.name, n, r, ctx.simulate(n, n, n, r))

        return _collect(ctx, self.name, cell, oos_aggregates(ctx.config.experiment.oos_shift_scales))


@register
class Shifts(Experiment):
    """The comparison repeated for several in-sample shift magnitudes."""

    name = "shifts"

    def run(self, ctx: RunContext) -> ResultTable:
        exp = ctx.config.experiment
        tables = []
        for j, scale in enumerate(exp.in_sample_shift_scales):
            label = f"{self.name}@{scale:g}"
            shift = ShiftSpec.identity(ctx.p, scale * ctx.config.simulation.shift_scale)

            def cell(key: tuple[int, int], j=j, label=label, shift=shift) -> list[ResultRow]:
                n, r = key
                pair = ctx.simulate(n, n, n, r, j, shift=shift)
                return _oos_rows(ctx, label, n, r, pair, folds=exp.shifts_folds)

            tables.append(_collect(ctx, label, cell, oos_aggregates(exp.oos_shift_scales)))
        return ResultTable.concat(tables)
