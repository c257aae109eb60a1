"""Shared test fixtures."""

from __future__ import annotations

from typing import Callable

import numpy as np
import pytest
import structlog

from causal_reg.models import Dataset, EnvPair
from causal_reg.population import PopulationQuantities, compute_population
from causal_reg.sem import NoiseSpec, SemStructure, ShiftSpec, benchmark_structure, sample_pair


@pytest.fixture
def worked_pair() -> EnvPair:
    """One row per environment: Ĝ = 3, Ẑ = 7, Ĝ⁺ = 5, Ẑ⁺ = 9."""
    return EnvPair(
        obs=Dataset.from_arrays([[1.0]], [1.0], "obs"),
        shifted=Dataset.from_arrays([[2.0]], [4.0], "shift"),
    )


@pytest.fixture
def benchmark() -> SemStructure:
    return benchmark_structure()


@pytest.fixture
def benchmark_pq(benchmark: SemStructure) -> PopulationQuantities:
    return compute_population(benchmark)


@pytest.fixture
def benchmark_sample(benchmark: SemStructure) -> Callable[..., EnvPair]:
    """Draw an identity-covariance benchmark pair: ``benchmark_sample(n, seed, n_obs=None)``."""
    noise = NoiseSpec.identity(benchmark.p)
    shift = ShiftSpec.identity(benchmark.p)

    def draw(n: int, seed: int, n_obs: int | None = None) -> EnvPair:
        return sample_pair(benchmark, noise, shift, n, n if n_obs is None else n_obs, seed)

    return draw


@pytest.fixture
def random_pair() -> Callable[..., EnvPair]:
    """Gaussian pair whose shifted covariates have five times the variance.

    The inflated variance keeps Ĝ positive definite with overwhelming probability.
    """

    def draw(seed: int, p: int = 4, n: int = 200) -> EnvPair:
        rng = np.random.default_rng(seed)
        beta = rng.normal(size=p)
        x_o = rng.normal(size=(n, p))
        x_e = rng.normal(size=(n, p)) * np.sqrt(5.0)
        y_o = x_o @ beta + rng.normal(size=n)
        y_e = x_e @ beta + 0.5 * x_e[:, 0] + rng.normal(size=n)
        return EnvPair(obs=Dataset(x_o, y_o, "obs"), shifted=Dataset(x_e, y_e, "shift"))

    return draw


@pytest.fixture
def random_psd() -> Callable[..., np.ndarray]:
    """``random_psd(rng, dim, rank)``: V·diag(w)·Vᵀ with rank nonzero eigenvalues in [0.1, 5]."""

    def build(rng: np.random.Generator, dim: int, rank: int) -> np.ndarray:
        v, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
        w = np.zeros(dim)
        w[:rank] = rng.uniform(0.1, 5.0, size=rank)
        a = (v * w) @ v.T
        return (a + a.T) / 2.0

    return build


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="rewrite the expected SVG files under tests/data/golden",
    )


@pytest.fixture
def update_golden(request: pytest.FixtureRequest) -> bool:
    return bool(request.config.getoption("--update-golden"))


@pytest.fixture(autouse=True)
def _clear_log_context():
    """Commands bind run context in the test thread; drop it after each test."""
    yield
    structlog.contextvars.clear_contextvars()
