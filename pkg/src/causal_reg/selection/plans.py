"""Resampling plans: a single train/test split or V-fold partitions, per environment."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from causal_reg.errors import ConfigError, InvalidInput, TooFewObservations, TooManyFolds
from causal_reg.models import EnvPair
from causal_reg.rng import make_rng

_SHIFTED, _OBS = 0, 1
MIN_PART = 2


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    """Test-set indicators (s_e, s_o); everything else is training data."""

    test_e: NDArray[np.bool_]
    test_o: NDArray[np.bool_]

    @property
    def train_idx(self) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
        return np.flatnonzero(~self.test_e), np.flatnonzero(~self.test_o)

    @property
    def test_idx(self) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
        return np.flatnonzero(self.test_e), np.flatnonzero(self.test_o)

    def train(self, pair: EnvPair) -> EnvPair:
        return pair.subset(*self.train_idx)

    def test(self, pair: EnvPair) -> EnvPair:
        return pair.subset(*self.test_idx)


@dataclass(frozen=True, eq=False)
class ResamplingPlan:
    """A uniform distribution over fold assignments."""

    assignments: list[FoldAssignment]
    n_e: int
    n_o: int

    def __post_init__(self) -> None:
        if not self.assignments:
            raise InvalidInput("a resampling plan needs at least one assignment")
        for a in self.assignments:
            if a.test_e.shape != (self.n_e,) or a.test_o.shape != (self.n_o,):
                raise InvalidInput("assignment lengths do not match the plan sizes")
            if not (a.test_e.any() and a.test_o.any()):
                raise InvalidInput("every test set must be nonempty")

    def __len__(self) -> int:
        return len(self.assignments)

    @property
    def weights(self) -> NDArray[np.float64]:
        return np.full(len(self.assignments), 1.0 / len(self.assignments))

    def check_fits(self, pair: EnvPair) -> None:
        if pair.sizes != (self.n_e, self.n_o):
            raise InvalidInput(
                f"plan was built for sizes {(self.n_e, self.n_o)}, data has {pair.sizes}"
            )

    def permuted(self, order: list[int]) -> ResamplingPlan:
        return ResamplingPlan([self.assignments[i] for i in order], self.n_e, self.n_o)


def _test_count(n: int, test_fraction: float) -> int:
    # round away representation noise before taking the ceiling (0.3·10 → 3)
    return math.ceil(round(test_fraction * n, 9))


def _split_mask(n: int, k: int, rng: np.random.Generator) -> NDArray[np.bool_]:
    mask = np.zeros(n, dtype=bool)
    mask[rng.choice(n, size=k, replace=False)] = True
    return mask


def _check_paired(n_e: int, n_o: int) -> None:
    if n_e != n_o:
        raise InvalidInput(f"paired plans need equal sizes, got n_e={n_e}, n_o={n_o}")


def make_split(
    n_e: int,
    n_o: int,
    test_fraction: float,
    seed: int,
    paired: bool = False,
) -> ResamplingPlan:
    """One split with ⌈test_fraction·n⌉ test indices per environment."""
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    if paired:
        _check_paired(n_e, n_o)
    for n in (n_e, n_o):
        k = _test_count(n, test_fraction)
        if k < MIN_PART or n - k < MIN_PART:
            raise TooFewObservations(
                f"split of n={n} at fraction {test_fraction} leaves train={n - k}, test={k}"
            )

    test_e = _split_mask(n_e, _test_count(n_e, test_fraction), make_rng(seed, _SHIFTED))
    if paired:
        test_o = test_e.copy()
    else:
        test_o = _split_mask(n_o, _test_count(n_o, test_fraction), make_rng(seed, _OBS))
    return ResamplingPlan([FoldAssignment(test_e, test_o)], n_e, n_o)


def _fold_ids(n: int, v: int, rng: np.random.Generator) -> NDArray[np.intp]:
    """Fold label per index; the first n mod v folds get one extra index."""
    sizes = np.full(v, n // v)
    sizes[: n % v] += 1
    labels = np.repeat(np.arange(v), sizes)
    ids = np.empty(n, dtype=np.intp)
    ids[rng.permutation(n)] = labels
    return ids


def make_vfold(n_e: int, n_o: int, v: int, seed: int, paired: bool = False) -> ResamplingPlan:
    """V assignments whose test sets partition each environment's indices."""
    if v < 2:
        raise ConfigError(f"V-fold needs v >= 2, got {v}")
    if v > min(n_e, n_o):
        raise TooManyFolds(f"v={v} exceeds the smaller sample size {min(n_e, n_o)}")
    if paired:
        _check_paired(n_e, n_o)

    ids_e = _fold_ids(n_e, v, make_rng(seed, _SHIFTED))
    ids_o = ids_e if paired else _fold_ids(n_o, v, make_rng(seed, _OBS))
    return ResamplingPlan(
        [FoldAssignment(ids_e == j, ids_o == j) for j in range(v)],
        n_e,
        n_o,
    )
