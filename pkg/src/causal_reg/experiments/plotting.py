"""Line charts of result tables as standalone, byte-reproducible SVG."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from causal_reg.errors import EmptyTable
from causal_reg.experiments.results import ResultTable, summarize

_RC = {
    "svg.hashsalt": "causal-reg",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


@dataclass(frozen=True)
class PlotSpec:
    metric: str
    how: Literal["mean", "median"] = "mean"
    # one series per lambda value, or a single series over n
    by_lambda: bool = True
    logx: bool = True
    logy: bool = True
    title: str = ""
    xlabel: str = "n"
    ylabel: str = ""
    absolute: bool = False


def build_figure(table: ResultTable, spec: PlotSpec) -> Figure:
    """One line artist per series, with gid ``series-<k>`` in series order."""
    if table.empty:
        raise EmptyTable("nothing to plot")
    by = ("n", "lambda") if spec.by_lambda else ("n",)
    summary = summarize(table, spec.metric, spec.how, by)
    if spec.absolute:
        summary = summary.assign(value=summary["value"].abs())

    fig = Figure(figsize=(5.0, 3.5))
    FigureCanvasSVG(fig)
    ax = fig.add_subplot()
    groups = summary.groupby("lambda", sort=True) if spec.by_lambda else [("", summary)]
    for k, (lam, part) in enumerate(groups):
        part = part.sort_values("n")
        label = f"λ={lam}" if lam != "" else spec.metric
        ax.plot(part["n"], part["value"], marker="o", markersize=3, label=label, gid=f"series-{k}")

    if spec.logx:
        ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel or spec.metric)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    return fig


def emit_svg(table: ResultTable, spec: PlotSpec, path: str | Path) -> Path:
    """Render *table* to *path*; identical inputs give identical bytes."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context(_RC):
        fig = build_figure(table, spec)
        fig.savefig(p, format="svg", metadata={"Date": None})
    return p
