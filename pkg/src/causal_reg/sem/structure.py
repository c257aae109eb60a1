"""Linear SEM structures with additive covariate shifts.

(Y, X) = B·(Y, X) + ε + (0, A) with B = [[0, βpaᵀ], [βch, Bx]]. X coordinates
are 1..p in the order given; Y is kept apart from X, never as column 0 of X.
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any

import numpy as np
import yaml
from numpy.typing import NDArray
from pydantic import BaseModel, BeforeValidator, ConfigDict, ValidationError, model_validator

from causal_reg.errors import ConfigError, SingularStructure
from causal_reg.linalg import DEFAULT_CLIP_TOL, clip_psd

_DET_TOL = 1e-12


def _vector(value: Any) -> NDArray[np.float64]:
    arr = np.array(value, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError("entries must be finite")
    arr.setflags(write=False)
    return arr


def _matrix(value: Any) -> NDArray[np.float64]:
    arr = np.atleast_2d(np.array(value, dtype=np.float64))
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("entries must be finite")
    arr.setflags(write=False)
    return arr


def _sym_matrix(value: Any) -> NDArray[np.float64]:
    arr = _matrix(value)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"covariance must be square, got {arr.shape}")
    sym = (arr + arr.T) / 2.0
    sym.setflags(write=False)
    return sym


Vector = Annotated[np.ndarray, BeforeValidator(_vector)]
Matrix = Annotated[np.ndarray, BeforeValidator(_matrix)]
Covariance = Annotated[np.ndarray, BeforeValidator(_sym_matrix)]


class SemStructure(BaseModel):
    """The constant structure B partitioned into (βpa, βch, Bx)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    beta_pa: Vector
    beta_ch: Vector
    b_x: Matrix

    @model_validator(mode="after")
    def _check_dims(self) -> SemStructure:
        p = self.beta_pa.shape[0]
        if self.beta_ch.shape != (p,) or self.b_x.shape != (p, p):
            raise ValueError(
                f"inconsistent dimensions: beta_pa {self.beta_pa.shape}, "
                f"beta_ch {self.beta_ch.shape}, b_x {self.b_x.shape}"
            )
        return self

    @property
    def p(self) -> int:
        return self.beta_pa.shape[0]

    @property
    def b_matrix(self) -> NDArray[np.float64]:
        """The assembled (p+1)×(p+1) matrix B."""
        b = np.zeros((self.p + 1, self.p + 1))
        b[0, 1:] = self.beta_pa
        b[1:, 0] = self.beta_ch
        b[1:, 1:] = self.b_x
        return b

    def reduced_form(self) -> NDArray[np.float64]:
        """(I − B)⁻¹, mapping ε + (0, A) to (Y, X)."""
        validate_structure(self)
        return np.linalg.solve(np.eye(self.p + 1) - self.b_matrix, np.eye(self.p + 1))


class _CovarianceSpec(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    cov: Covariance

    @model_validator(mode="after")
    def _check_psd(self) -> _CovarianceSpec:
        clip_psd(self.cov, DEFAULT_CLIP_TOL)
        return self

    @property
    def dim(self) -> int:
        return self.cov.shape[0]

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.cov, np.eye(self.dim)))


class NoiseSpec(_CovarianceSpec):
    """Covariance Σ of ε = (ε_Y, ε_X); (p+1)×(p+1)."""

    @classmethod
    def identity(cls, p: int, scale: float = 1.0) -> NoiseSpec:
        return cls(cov=scale * np.eye(p + 1))


class ShiftSpec(_CovarianceSpec):
    """Covariance C[A] of the shift; the zero matrix is the observational environment."""

    @classmethod
    def identity(cls, p: int, scale: float = 1.0) -> ShiftSpec:
        return cls(cov=scale * np.eye(p))

    @classmethod
    def zero(cls, p: int) -> ShiftSpec:
        return cls(cov=np.zeros((p, p)))

    def scaled(self, factor: float) -> ShiftSpec:
        return ShiftSpec(cov=factor * self.cov)


def validate_structure(s: SemStructure) -> SemStructure:
    """Return *s* unchanged if I − B is nonsingular, else raise SingularStructure."""
    det = np.linalg.det(np.eye(s.p + 1) - s.b_matrix)
    if not abs(det) > _DET_TOL:
        raise SingularStructure(f"|det(I - B)| = {abs(det):.3e} <= {_DET_TOL:g}")
    return s


def benchmark_structure() -> SemStructure:
    """The six-covariate simulation benchmark.

    X1 → X2, X1 → X3, X2 → X3, X2 → Y, X3 → Y, Y → X4, Y → X5, X5 → X6.
    """
    b_x = np.zeros((6, 6))
    for child, parent in [(2, 1), (3, 1), (3, 2), (6, 5)]:
        b_x[child - 1, parent - 1] = 1.0
    return SemStructure(
        beta_pa=[0, 1, 1, 0, 0, 0],
        beta_ch=[0, 0, 0, 1, 1, 0],
        b_x=b_x,
    )


def load_structure(path: str | Path) -> SemStructure:
    """Read a YAML file with keys beta_pa, beta_ch, b_x."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"structure file not found: {p}")
    try:
        with open(p) as f:
            data = yaml.safe_load(f) or {}
        structure = SemStructure.model_validate(data)
    except (yaml.YAMLError, ValidationError) as exc:
        raise ConfigError(f"invalid structure file {p}: {exc}") from exc
    return validate_structure(structure)
