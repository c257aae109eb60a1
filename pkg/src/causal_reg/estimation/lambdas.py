"""Regularization strengths λ ∈ [0, ∞] with an explicit ∞ state."""

from __future__ import annotations

import math
from enum import Enum
from typing import Iterable, TypeAlias

import numpy as np

from causal_reg.errors import InvalidGrid


class Infinity(Enum):
    """The λ = ∞ endpoint (causal Dantzig). Never represented as a large float."""

    INF = "inf"

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"


INF = Infinity.INF

LambdaValue: TypeAlias = float | Infinity


def is_infinite(lam: LambdaValue) -> bool:
    return lam is INF


def parse_lambda(value: object) -> LambdaValue:
    """Accept a nonneg number, the INF sentinel, or the strings "inf"/"infinity"."""
    if value is INF:
        return INF
    if isinstance(value, str):
        text = value.strip().lower()
        if text in {"inf", "+inf", "infinity", "∞"}:
            return INF
        try:
            value = float(text)
        except ValueError as exc:
            raise InvalidGrid(f"not a lambda value: {value!r}") from exc
    lam = float(value)  # type: ignore[arg-type]
    if math.isinf(lam) and lam > 0:
        return INF
    if not math.isfinite(lam) or lam < 0:
        raise InvalidGrid(f"lambda must be a finite nonneg number or inf, got {value!r}")
    return lam


def lambda_key(lam: LambdaValue) -> float:
    """Sort key placing INF after every finite value."""
    return math.inf if lam is INF else float(lam)


def format_lambda(lam: LambdaValue) -> str:
    return "inf" if lam is INF else f"{float(lam):.17g}"


def lambda_as_float(lam: LambdaValue) -> float:
    """For tabular output only; numerical code branches on INF explicitly."""
    return math.inf if lam is INF else float(lam)


def check_grid(lambdas: Iterable[object]) -> list[LambdaValue]:
    """Parse and validate a grid: nonempty, strictly increasing, INF last if present."""
    grid = [parse_lambda(v) for v in lambdas]
    if not grid:
        raise InvalidGrid("lambda grid is empty")
    keys = [lambda_key(v) for v in grid]
    for a, b in zip(keys, keys[1:]):
        if not a < b:
            raise InvalidGrid(f"lambda grid must be strictly increasing; got {a!r} then {b!r}")
    return grid


def default_grid(
    num: int = 20,
    low: float = 1e-2,
    high: float = 1e3,
    include_zero: bool = True,
    include_infinity: bool = True,
) -> list[LambdaValue]:
    """{0} ∪ num log-spaced values in [low, high] ∪ {∞}."""
    grid: list[LambdaValue] = [float(v) for v in np.logspace(np.log10(low), np.log10(high), num)]
    if include_zero:
        grid.insert(0, 0.0)
    if include_infinity:
        grid.append(INF)
    return check_grid(grid)
