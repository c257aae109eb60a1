"""Long-format result tables.

Every command and experiment reports rows of
(run_id, experiment, replication, n, lambda, metric, value). The key
(run_id, experiment, replication, n, lambda, metric) is unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, Sequence

import pandas as pd

from causal_reg.errors import EmptyTable, InvalidInput
from causal_reg.estimation import LambdaValue, format_lambda

COLUMNS = ["run_id", "experiment", "replication", "n", "lambda", "metric", "value"]
KEY = COLUMNS[:-1]
FLOAT_FORMAT = "%.17g"
# replication value of rows that summarize all replications of a cell
ALL_REPLICATIONS = -1


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    replication: int
    n: int
    lam: LambdaValue | None
    metric: str
    value: float


class ResultTable:
    """A validated long-format frame; the lambda column holds text ("" when unused)."""

    def __init__(self, frame: pd.DataFrame) -> None:
        missing = [c for c in COLUMNS if c not in frame.columns]
        if missing:
            raise InvalidInput(f"result frame lacks columns {missing}")
        frame = frame[COLUMNS].reset_index(drop=True)
        dup = frame.duplicated(subset=KEY)
        if dup.any():
            first = frame.loc[dup.idxmax(), KEY].to_dict()
            raise InvalidInput(f"duplicate result key {first}")
        self.frame = frame

    @classmethod
    def from_rows(cls, run_id: str, rows: Iterable[ResultRow]) -> ResultTable:
        records = [
            {
                "run_id": run_id,
                "experiment": r.experiment,
                "replication": int(r.replication),
                "n": int(r.n),
                "lambda": "" if r.lam is None else format_lambda(r.lam),
                "metric": r.metric,
                "value": float(r.value),
            }
            for r in rows
        ]
        frame = pd.DataFrame.from_records(records, columns=COLUMNS)
        return cls(frame.astype({"replication": "int64", "n": "int64", "value": "float64"}))

    @classmethod
    def concat(cls, tables: Iterable[ResultTable]) -> ResultTable:
        frames = [t.frame for t in tables]
        if not frames:
            return cls(pd.DataFrame(columns=COLUMNS))
        return cls(pd.concat(frames, ignore_index=True))

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def empty(self) -> bool:
        return self.frame.empty

    def metric(self, name: str) -> pd.DataFrame:
        return self.frame[self.frame["metric"] == name]

    def value(self, metric: str, lam: str = "", replication: int = 0) -> float:
        """The single value for (metric, lambda, replication); raises if absent or ambiguous."""
        rows = self.frame[
            (self.frame["metric"] == metric)
            & (self.frame["lambda"] == lam)
            & (self.frame["replication"] == replication)
        ]
        if len(rows) != 1:
            raise InvalidInput(f"expected one row for {metric!r} at lambda={lam!r}, got {len(rows)}")
        return float(rows["value"].iloc[0])

    def to_csv(self, path: str | Path) -> Path:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        self.frame.to_csv(p, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return p

    @classmethod
    def read_csv(cls, path: str | Path) -> ResultTable:
        frame = pd.read_csv(
            path,
            dtype={"run_id": str, "experiment": str, "lambda": str, "metric": str},
            keep_default_na=False,
            na_values={"value": ["nan"]},
            float_precision="round_trip",
        )
        return cls(frame)


def summarize(
    table: ResultTable,
    metric: str,
    how: Literal["mean", "median"] = "mean",
    by: Sequence[str] = ("n", "lambda"),
) -> pd.DataFrame:
    """Aggregate one metric over replications, per (n, lambda) by default."""
    rows = table.metric(metric)
    if rows.empty:
        raise EmptyTable(f"no rows for metric {metric!r}")
    return (
        rows.groupby(list(by), sort=True)["value"]
        .agg(how)
        .reset_index()
    )


def with_aggregates(
    table: ResultTable,
    experiment: str,
    aggregates: Sequence[tuple[str, Literal["mean", "median"], str]],
    by: Sequence[str] = ("n",),
) -> ResultTable:
    """Append one summary row per group for each (metric, how, name) triple.

    Summary rows carry replication ALL_REPLICATIONS, the metric *name* and,
    unless grouped by lambda, an empty lambda.
    """
    if table.empty:
        return table
    run_id = str(table.frame["run_id"].iloc[0])
    frames = [table.frame]
    for metric, how, name in aggregates:
        summary = summarize(table, metric, how, by)
        frames.append(pd.DataFrame({
            "run_id": run_id,
            "experiment": experiment,
            "replication": ALL_REPLICATIONS,
            "n": summary["n"].astype("int64"),
            "lambda": summary["lambda"] if "lambda" in by else "",
            "metric": name,
            "value": summary["value"].astype("float64"),
        }))
    return ResultTable(pd.concat(frames, ignore_index=True))
