"""Datasets and environment pairs, the sole input to all estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from causal_reg.errors import InvalidInput


@dataclass(frozen=True, eq=False)
class Dataset:
    """n observations of p covariates and a target, tagged with an environment label."""

    x: NDArray[np.float64]
    y: NDArray[np.float64]
    label: str = ""

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=np.float64)
        y = np.array(self.y, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2 or y.ndim != 1:
            raise InvalidInput(f"x must be n×p and y length-n, got {x.shape} and {y.shape}")
        if x.shape[0] != y.shape[0]:
            raise InvalidInput(f"row counts differ: x has {x.shape[0]}, y has {y.shape[0]}")
        if x.shape[0] < 1:
            raise InvalidInput("dataset needs at least one row")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidInput(f"dataset {self.label!r} has non-finite entries")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_arrays(cls, x: ArrayLike, y: ArrayLike, label: str = "") -> Dataset:
        return cls(np.asarray(x), np.asarray(y), label)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def subset(self, indices: ArrayLike) -> Dataset:
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(self.x[idx], self.y[idx], self.label)

    def centered(self) -> Dataset:
        return Dataset(self.x - self.x.mean(axis=0), self.y - self.y.mean(), self.label)


@dataclass(frozen=True, eq=False)
class EnvPair:
    """An observational dataset and a shifted dataset over the same covariates."""

    obs: Dataset
    shifted: Dataset

    def __post_init__(self) -> None:
        if self.obs.p != self.shifted.p:
            raise InvalidInput(
                f"covariate counts differ: obs has {self.obs.p}, shifted has {self.shifted.p}"
            )

    @property
    def p(self) -> int:
        return self.obs.p

    @property
    def sizes(self) -> tuple[int, int]:
        """(n_e, n_o)."""
        return self.shifted.n, self.obs.n

    def subset(self, idx_e: ArrayLike, idx_o: ArrayLike) -> EnvPair:
        return EnvPair(obs=self.obs.subset(idx_o), shifted=self.shifted.subset(idx_e))
