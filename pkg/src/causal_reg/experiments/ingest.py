"""Two-environment CSV ingestion and the matching data writer.

File format: a header row, covariate columns x1..xp, a target column ``y``
and an environment column whose values are the two labels (observational
first). Covariates are taken in file order.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd
import structlog

from causal_reg.errors import (
    DataError,
    EmptyEnvironment,
    InvalidInput,
    MissingColumn,
    NonNumericCell,
    UnknownLabel,
)
from causal_reg.models import Dataset, EnvPair

log = structlog.get_logger("ingest")

TARGET = "y"
DEFAULT_LABELS = ("obs", "shift")
FLOAT_FORMAT = "%.17g"


def _numeric(frame: pd.DataFrame, column: str) -> np.ndarray:
    """Column as finite float64, or NonNumericCell at the first offending data row (1-based)."""
    raw = frame[column]
    values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=np.float64)
    bad = ~np.isfinite(values)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise NonNumericCell(row + 1, column)
    return values


def ingest_csv(
    path: str | Path,
    env_column: str = "env",
    env_labels: Sequence[str] = DEFAULT_LABELS,
    center: bool = False,
) -> EnvPair:
    """Read a CSV into an EnvPair, optionally mean-centering each environment."""
    if len(env_labels) != 2 or env_labels[0] == env_labels[1]:
        raise InvalidInput(f"need two distinct environment labels, got {list(env_labels)}")
    p = Path(path)
    if not p.exists():
        raise DataError(f"data file not found: {p}")

    try:
        frame = pd.read_csv(p, dtype={env_column: str}, float_precision="round_trip")
    except pd.errors.EmptyDataError as exc:
        raise DataError(f"data file {p} is empty") from exc

    for column in (TARGET, env_column):
        if column not in frame.columns:
            raise MissingColumn(column)
    x_columns = [c for c in frame.columns if c not in (TARGET, env_column)]
    if not x_columns:
        raise MissingColumn("x1")

    labels = frame[env_column].fillna("").astype(str).str.strip()
    unknown = labels[~labels.isin(list(env_labels))]
    if len(unknown):
        raise UnknownLabel(str(unknown.iloc[0]))

    x = np.column_stack([_numeric(frame, c) for c in x_columns])
    y = _numeric(frame, TARGET)

    datasets = []
    for label in env_labels:
        mask = (labels == label).to_numpy()
        if not mask.any():
            raise EmptyEnvironment(label)
        d = Dataset(x[mask], y[mask], label)
        datasets.append(d.centered() if center else d)

    obs, shifted = datasets
    log.info("csv_ingested", path=str(p), p=len(x_columns), n_o=obs.n, n_e=shifted.n, center=center)
    return EnvPair(obs=obs, shifted=shifted)


def pair_frame(pair: EnvPair, env_column: str = "env", env_labels: Sequence[str] = DEFAULT_LABELS) -> pd.DataFrame:
    """Observational rows then shifted rows, columns x1..xp, y, env."""
    parts = []
    for d, label in ((pair.obs, env_labels[0]), (pair.shifted, env_labels[1])):
        part = pd.DataFrame(d.x, columns=[f"x{j + 1}" for j in range(d.p)])
        part[TARGET] = d.y
        part[env_column] = label
        parts.append(part)
    return pd.concat(parts, ignore_index=True)


def write_pair_csv(
    pair: EnvPair,
    path: str | Path,
    env_column: str = "env",
    env_labels: Sequence[str] = DEFAULT_LABELS,
) -> Path:
    """Write *pair* in the format ingest_csv reads, floats at 17 significant digits."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    pair_frame(pair, env_column, env_labels).to_csv(
        p, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    return p
