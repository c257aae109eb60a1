"""Configuration schema: Pydantic models for config.yaml."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, BeforeValidator, Field, field_validator, model_validator

from causal_reg.errors import InvalidGrid
from causal_reg.estimation.lambdas import (
    Infinity,
    LambdaValue,
    check_grid,
    default_grid,
    parse_lambda,
)


def _lambda(value: Any) -> LambdaValue:
    try:
        return parse_lambda(value)
    except (InvalidGrid, TypeError) as exc:
        raise ValueError(str(exc)) from exc


def _optional_lambda(value: Any) -> LambdaValue | None:
    return None if value is None else _lambda(value)


LambdaSetting = Annotated[float | Infinity, BeforeValidator(_lambda)]
OptionalLambda = Annotated[float | Infinity | None, BeforeValidator(_optional_lambda)]


class LoggingConfig(BaseModel):
    level: str = "INFO"
    format: Literal["json", "console"] = "json"


class StructureConfig(BaseModel):
    source: Literal["benchmark", "file"] = "benchmark"
    path: str | None = None

    @model_validator(mode="after")
    def _file_exists(self) -> StructureConfig:
        if self.source == "file":
            if self.path is None:
                raise ValueError("structure.source 'file' needs structure.path")
            if not Path(self.path).exists():
                raise ValueError(f"structure file not found: {self.path}")
        return self


class SimulationConfig(BaseModel):
    n: int = Field(1000, ge=1)
    # observational size; defaults to n
    n_obs: int | None = Field(None, ge=1)
    noise_scale: float = Field(1.0, gt=0)
    shift_scale: float = Field(1.0, ge=0)

    @property
    def sizes(self) -> tuple[int, int]:
        """(n_e, n_o)."""
        return self.n, self.n if self.n_obs is None else self.n_obs


class DataConfig(BaseModel):
    path: str | None = None
    env_column: str = "env"
    env_labels: list[str] = Field(default_factory=lambda: ["obs", "shift"])
    center: bool = False

    @field_validator("env_labels")
    @classmethod
    def _two_labels(cls, v: list[str]) -> list[str]:
        if len(v) != 2 or v[0] == v[1]:
            raise ValueError("env_labels needs two distinct labels, observational first")
        return v


class GridConfig(BaseModel):
    values: list[LambdaSetting] | None = None
    num: int = Field(20, ge=1)
    low: float = Field(1e-2, gt=0)
    high: float = Field(1e3, gt=0)
    include_zero: bool = True
    include_infinity: bool = True

    @model_validator(mode="after")
    def _valid(self) -> GridConfig:
        if self.values is None and not self.low < self.high:
            raise ValueError("grid.low must be below grid.high")
        try:
            self.lambdas()
        except InvalidGrid as exc:
            raise ValueError(str(exc)) from exc
        return self

    def lambdas(self) -> list[LambdaValue]:
        if self.values is not None:
            return check_grid(self.values)
        return default_grid(self.num, self.low, self.high, self.include_zero, self.include_infinity)


class EstimationConfig(BaseModel):
    lam: LambdaSetting = 1.0
    clip_tol: float = Field(math.inf, gt=0)
    rank_tol: float | None = Field(None, gt=0)


class SelectionConfig(BaseModel):
    method: Literal["vfold", "split"] = "vfold"
    folds: int = Field(5, ge=2)
    test_fraction: float = Field(0.5, gt=0, lt=1)
    paired: bool = False


class BootstrapConfig(BaseModel):
    b: int = Field(100, ge=1)
    alpha: float = Field(0.05, gt=0, le=1)
    test_fraction: float = Field(0.5, gt=0, lt=1)
    # bypasses the selector when set
    lam: OptionalLambda = None


class BoundsConfig(BaseModel):
    q: float = Field(1.0, gt=0)
    tau: float = Field(10.0, ge=0)
    n_new: int | None = Field(None, ge=1)


class ExperimentConfig(BaseModel):
    name: str = "convergence"
    replications: int = Field(20, ge=1)
    sample_sizes: list[int] = Field(default_factory=lambda: [100, 1000, 10000, 100000])
    lam: LambdaSetting = 0.2
    tau: float = Field(10.0, ge=0)
    test_n: int = Field(100_000, ge=1)
    oos_shift_scales: list[float] = Field(default_factory=lambda: [100.0, 500.0, 1000.0])
    in_sample_shift_scales: list[float] = Field(default_factory=lambda: [0.5, 1.0, 1.5])
    shifts_folds: int = Field(3, ge=2)

    @field_validator("sample_sizes")
    @classmethod
    def _positive_sizes(cls, v: list[int]) -> list[int]:
        if not v or any(n < 1 for n in v):
            raise ValueError("sample_sizes must be a nonempty list of positive integers")
        return v


class AppConfig(BaseModel):
    run_id: str = "run"
    seed: int = Field(0, ge=0, lt=2**64)
    threads: int = Field(1, ge=1)
    output_dir: str = "results"
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    structure: StructureConfig = Field(default_factory=StructureConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    data: DataConfig = Field(default_factory=DataConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    estimation: EstimationConfig = Field(default_factory=EstimationConfig)
    selection: SelectionConfig = Field(default_factory=SelectionConfig)
    bootstrap: BootstrapConfig = Field(default_factory=BootstrapConfig)
    bounds: BoundsConfig = Field(default_factory=BoundsConfig)
    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)

    @field_validator("run_id")
    @classmethod
    def _safe_run_id(cls, v: str) -> str:
        if not v or any(c in v for c in "/\\") or v.startswith("."):
            raise ValueError(f"run_id must be a plain file-name stem, got {v!r}")
        return v
