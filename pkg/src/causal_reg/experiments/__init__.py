"""CLI, CSV ingestion, result tables, plots and simulation studies."""

from causal_reg.experiments.ingest import ingest_csv, write_pair_csv
from causal_reg.experiments.plotting import PlotSpec, build_figure, emit_svg
from causal_reg.experiments.registry import EXPERIMENT_REGISTRY, Experiment, get_experiment, register
from causal_reg.experiments.results import ALL_REPLICATIONS, ResultRow, ResultTable, summarize, with_aggregates

__all__ = [
    "ALL_REPLICATIONS",
    "EXPERIMENT_REGISTRY",
    "Experiment",
    "PlotSpec",
    "ResultRow",
    "ResultTable",
    "build_figure",
    "emit_svg",
    "get_experiment",
    "ingest_csv",
    "register",
    "summarize",
    "with_aggregates",
    "write_pair_csv",
]
