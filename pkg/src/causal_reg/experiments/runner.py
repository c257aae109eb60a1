"""Command-line entry point: parse flags, load config, run one command."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

import structlog

from causal_reg.config import apply_overrides, load_config
from causal_reg.errors import CausalRegError
from causal_reg.experiments.commands import execute
from causal_reg.experiments.context import RunContext
from causal_reg.logging import bind_run, setup_logging

log = structlog.get_logger("runner")

# CLI flag dest -> dotted config key
_OVERRIDES = {
    "seed": "seed",
    "out": "output_dir",
    "threads": "threads",
    "run_id": "run_id",
    "data": "data.path",
    "center": "data.center",
    "n": "simulation.n",
    "n_obs": "simulation.n_obs",
    "lam": "estimation.lam",
    "folds": "selection.folds",
    "method": "selection.method",
    "paired": "selection.paired",
    "b": "bootstrap.b",
    "alpha": "bootstrap.alpha",
    "fixed_lam": "bootstrap.lam",
    "tau": "bounds.tau",
    "q": "bounds.q",
    "n_new": "bounds.n_new",
    "name": "experiment.name",
    "replications": "experiment.replications",
}


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="Path to config.yaml")
    parser.add_argument("--seed", type=int, default=None, help="Master seed")
    parser.add_argument("--out", default=None, help="Output directory")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads")
    parser.add_argument("--run-id", dest="run_id", default=None, help="Output file stem")


def _data(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", default=None, help="Two-environment CSV (simulates if omitted)")
    parser.add_argument("--center", action="store_true", default=None, help="Center each environment")
    parser.add_argument("--n", type=int, default=None, help="Simulated shifted sample size")
    parser.add_argument("--n-obs", dest="n_obs", type=int, default=None, help="Simulated observational size")


def _selection(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--folds", type=int, default=None)
    parser.add_argument("--method", choices=["vfold", "split"], default=None)
    parser.add_argument("--paired", action="store_true", default=None, help="Same fold indices in both environments")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-reg",
        description="Causal regularization for two-environment linear SEMs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="Draw an observational/shifted pair and write it as CSV")
    _common(p_sim)
    p_sim.add_argument("--n", type=int, default=None)
    p_sim.add_argument("--n-obs", dest="n_obs", type=int, default=None)

    p_fit = sub.add_parser("fit", help="Fit the estimator at one lambda")
    _common(p_fit)
    _data(p_fit)
    p_fit.add_argument("--lam", default=None, help='Lambda (number or "inf")')

    p_path = sub.add_parser("path", help="Fit the regularization path over the grid")
    _common(p_path)
    _data(p_path)

    p_sel = sub.add_parser("select", help="Select lambda by cross-validated risk difference")
    _common(p_sel)
    _data(p_sel)
    _selection(p_sel)

    p_boot = sub.add_parser("bootstrap", help="Bootstrap interval for the selected model")
    _common(p_boot)
    _data(p_boot)
    _selection(p_boot)
    p_boot.add_argument("--b", type=int, default=None, help="Bootstrap replicates")
    p_boot.add_argument("--alpha", type=float, default=None)
    p_boot.add_argument("--lam", dest="fixed_lam", default=None, help="Skip selection and use this lambda")

    p_bound = sub.add_parser("bound", help="Finite-sample worst-risk bound components")
    _common(p_bound)
    _data(p_bound)
    p_bound.add_argument("--lam", default=None)
    p_bound.add_argument("--tau", type=float, default=None)
    p_bound.add_argument("--q", type=float, default=None)
    p_bound.add_argument("--n-new", dest="n_new", type=int, default=None)

    p_exp = sub.add_parser("experiment", help="Run a registered simulation study")
    _common(p_exp)
    _selection(p_exp)
    p_exp.add_argument("name", nargs="?", default=None, help="convergence | coverage | compare | shifts")
    p_exp.add_argument("--replications", type=int, default=None)
    return parser


def _error_record(exc: CausalRegError) -> str:
    return json.dumps(
        {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code},
        sort_keys=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point: returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging()
    overrides: dict[str, Any] = {
        key: getattr(args, dest) for dest, key in _OVERRIDES.items() if hasattr(args, dest)
    }
    try:
        config = apply_overrides(load_config(args.config), overrides)
        setup_logging(level=config.logging.level, log_format=config.logging.format)
        bind_run(run_id=config.run_id, command=args.command)
        log.info("command_started", seed=config.seed)
        written = execute(args.command, RunContext.from_config(config))
    except CausalRegError as exc:
        log.error("command_failed", command=args.command, error=type(exc).__name__, message=str(exc))
        print(_error_record(exc))
        return exc.exit_code

    print(json.dumps({"command": args.command, "files": [str(p) for p in written]}, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
