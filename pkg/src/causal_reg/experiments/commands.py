"""CLI commands: compositions of the library over a configured run.

Every command returns its ResultTable; ``execute`` writes it as
``<output_dir>/<run_id>_<command>.csv`` plus any side files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable

import numpy as np
import structlog

from causal_reg.bootstrap import bootstrap_worst_risk_ci
from causal_reg.bounds import (
    BoundInputs,
    bound_core,
    eta,
    normalized_excess_risk,
    phi,
    sample_risk_bound,
    worst_risk_bound,
)
from causal_reg.estimation import (
    compute_moments,
    fit,
    fit_path,
    lambda_as_float,
    regularizer_norm_hat,
    risk_diff_hat,
    risk_sum_hat,
)
from causal_reg.experiments.context import RunContext, Stream
from causal_reg.experiments.ingest import write_pair_csv
from causal_reg.experiments.plotting import PlotSpec, emit_svg
from causal_reg.experiments.registry import get_experiment
from causal_reg.experiments.results import ResultRow, ResultTable
from causal_reg.models import EnvPair
from causal_reg.population import compute_population, population_worst_risk
from causal_reg.selection import sample_selector

log = structlog.get_logger("commands")


def _n(pair: EnvPair) -> int:
    return pair.shifted.n + pair.obs.n


def _coef_rows(command: str, n: int, lam, coef: np.ndarray) -> list[ResultRow]:
    return [ResultRow(command, 0, n, lam, f"coef_{j + 1}", float(c)) for j, c in enumerate(coef)]


def cmd_simulate(ctx: RunContext) -> ResultTable:
    """Draw the configured pair; the rows describe it, the data goes to a side file."""
    n_e, n_o = ctx.config.simulation.sizes
    pair = ctx.simulate(n_e, n_o)
    path = write_pair_csv(pair, _side_files(ctx) / f"{ctx.config.run_id}_simulate_data.csv")
    log.info("data_written", path=str(path), n_e=n_e, n_o=n_o)
    m = compute_moments(pair)
    rows = [
        ResultRow("simulate", 0, n_e + n_o, None, "n_e", n_e),
        ResultRow("simulate", 0, n_e + n_o, None, "n_o", n_o),
        ResultRow("simulate", 0, n_e + n_o, None, "p", pair.p),
        ResultRow("simulate", 0, n_e + n_o, None, "yy_e", m.yy_e),
        ResultRow("simulate", 0, n_e + n_o, None, "yy_o", m.yy_o),
    ]
    return ResultTable.from_rows(ctx.config.run_id, rows)


def cmd_fit(ctx: RunContext) -> ResultTable:
    est = ctx.config.estimation
    pair = ctx.load_pair()
    m = compute_moments(pair, clip_tol=est.clip_tol)
    result = fit(m, est.lam, est.rank_tol)
    n = _n(pair)
    rows = _coef_rows("fit", n, result.lam, result.coef) + [
        ResultRow("fit", 0, n, result.lam, "rank_deficient", float(result.rank_deficient)),
        ResultRow("fit", 0, n, result.lam, "risk_sum_hat", risk_sum_hat(pair, result.coef)),
        ResultRow("fit", 0, n, result.lam, "risk_diff_hat", risk_diff_hat(pair, result.coef)),
        ResultRow("fit", 0, n, result.lam, "regularizer_norm_hat", regularizer_norm_hat(m, result.coef)),
        ResultRow("fit", 0, n, None, "n_clipped", m.n_clipped),
    ]
    return ResultTable.from_rows(ctx.config.run_id, rows)


def cmd_path(ctx: RunContext) -> ResultTable:
    est = ctx.config.estimation
    pair = ctx.load_pair()
    m = compute_moments(pair, clip_tol=est.clip_tol)
    path = fit_path(m, ctx.grid, rank_tol=est.rank_tol, threads=ctx.threads)
    n = _n(pair)
    rows: list[ResultRow] = []
    for lam, coef, deficient in zip(path.lambdas, path.coefs, path.rank_deficient):
        rows += _coef_rows("path", n, lam, coef)
        rows += [
            ResultRow("path", 0, n, lam, "rank_deficient", float(deficient)),
            ResultRow("path", 0, n, lam, "risk_sum_hat", risk_sum_hat(pair, coef)),
            ResultRow("path", 0, n, lam, "regularizer_norm_hat", regularizer_norm_hat(m, coef)),
        ]
    return ResultTable.from_rows(ctx.config.run_id, rows)


def cmd_select(ctx: RunContext) -> ResultTable:
    est = ctx.config.estimation
    pair = ctx.load_pair()
    plan = ctx.selection_plan(*pair.sizes)
    result = sample_selector(
        pair, ctx.grid, plan, clip_tol=est.clip_tol, rank_tol=est.rank_tol, threads=ctx.threads,
    )
    n = _n(pair)
    rows = [ResultRow("select", 0, n, None, "chosen_lambda", lambda_as_float(result.chosen_lambda))]
    for j, lam in enumerate(result.grid):
        rows.append(ResultRow("select", 0, n, lam, "loss", result.loss_curve[j]))
        rows += [
            ResultRow("select", k + 1, n, lam, "fold_loss", fold[j])
            for k, fold in enumerate(result.per_fold_losses)
        ]
    return ResultTable.from_rows(ctx.config.run_id, rows)


def cmd_bootstrap(ctx: RunContext) -> ResultTable:
    cfg = ctx.config
    pair = ctx.load_pair()
    split = ctx.bootstrap_split(*pair.sizes)
    plan = None
    if cfg.bootstrap.lam is None:
        plan = ctx.selection_plan(*split.assignments[0].train(pair).sizes)
    result = bootstrap_worst_risk_ci(
        pair, split, ctx.grid, plan, cfg.bootstrap.b, cfg.bootstrap.alpha,
        ctx.seed(Stream.BOOTSTRAP, 1), fixed_lambda=cfg.bootstrap.lam,
        clip_tol=cfg.estimation.clip_tol, rank_tol=cfg.estimation.rank_tol, threads=ctx.threads,
    )
    n = _n(pair)
    lam = result.chosen_lambda
    rows = [
        ResultRow("bootstrap", 0, n, lam, "lower", result.lower),
        ResultRow("bootstrap", 0, n, lam, "upper", result.upper),
        ResultRow("bootstrap", 0, n, lam, "level", result.level),
    ]
    rows += [ResultRow("bootstrap", b + 1, n, lam, "draw", d) for b, d in enumerate(result.draws)]
    return ResultTable.from_rows(ctx.config.run_id, rows)


def cmd_bound(ctx: RunContext) -> ResultTable:
    cfg = ctx.config
    tau, q = cfg.bounds.tau, cfg.bounds.q
    pair = ctx.load_pair()
    m = compute_moments(pair, clip_tol=cfg.estimation.clip_tol)
    result = fit(m, cfg.estimation.lam, cfg.estimation.rank_tol)
    beta, lam = result.coef, result.lam
    inputs = BoundInputs.from_pair(pair, q)
    r_pred, r_diff = risk_sum_hat(pair, beta), risk_diff_hat(pair, beta)
    n_new = cfg.bounds.n_new or pair.shifted.n
    core = bound_core(r_pred, r_diff, tau)
    values = {
        "phi_e": inputs.phi_e,
        "phi_o": inputs.phi_o,
        "phi_plus": inputs.phi_plus,
        "phi_new": phi(inputs.p, n_new, q, inputs.var_y_e, inputs.max_var_x_e),
        "eta": eta(inputs, beta, tau),
        "bound_core": core,
        "worst_risk_bound": worst_risk_bound(inputs, beta, r_pred, r_diff, tau),
        "sample_risk_bound": sample_risk_bound(inputs, beta, r_pred, r_diff, tau, n_new),
        "l1_norm": float(np.abs(beta).sum()),
        "plug_in": float(inputs.plug_in),
    }
    if ctx.simulated:
        pq = compute_population(ctx.structure, ctx.noise, ctx.shift)
        sup = population_worst_risk(pq, beta, tau)
        values["population_worst_risk"] = sup
        values["normalized_excess_risk"] = normalized_excess_risk(beta, sup, core, tau)
    n = _n(pair)
    rows = [ResultRow("bound", 0, n, lam, k, v) for k, v in values.items()]
    return ResultTable.from_rows(ctx.config.run_id, rows)


def cmd_experiment(ctx: RunContext) -> ResultTable:
    experiment = get_experiment(ctx.config.experiment.name)
    return experiment.run(ctx)


COMMANDS: dict[str, Callable[[RunContext], ResultTable]] = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "path": cmd_path,
    "select": cmd_select,
    "bootstrap": cmd_bootstrap,
    "bound": cmd_bound,
    "experiment": cmd_experiment,
}


def _side_files(ctx: RunContext) -> Path:
    out = Path(ctx.config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _plot_spec(ctx: RunContext, command: str) -> PlotSpec | None:
    if command == "experiment":
        return get_experiment(ctx.config.experiment.name).plot_spec(ctx)
    return None


def execute(command: str, ctx: RunContext) -> list[Path]:
    """Run *command* and write its outputs; returns the written paths."""
    table = COMMANDS[command](ctx)
    out = _side_files(ctx)
    written = [table.to_csv(out / f"{ctx.config.run_id}_{command}.csv")]
    if command == "simulate":
        written.insert(0, out / f"{ctx.config.run_id}_simulate_data.csv")
    spec = _plot_spec(ctx, command)
    if spec is not None and not table.metric(spec.metric).empty:
        written.append(emit_svg(table, spec, out / f"{ctx.config.run_id}_{command}.svg"))
    log.info("command_finished", command=command, rows=len(table), files=[str(p) for p in written])
    return written
