"""Gaussian sampling from a linear SEM with an additive covariate shift."""

from __future__ import annotations

import structlog

from causal_reg.errors import InvalidInput
from causal_reg.linalg import psd_sqrt
from causal_reg.models import Dataset, EnvPair
from causal_reg.rng import derive_seed, make_rng
from causal_reg.sem.structure import NoiseSpec, SemStructure, ShiftSpec

log = structlog.get_logger("sem")


def sample_sem(
    s: SemStructure,
    noise: NoiseSpec,
    shift: ShiftSpec,
    n: int,
    seed: int,
    label: str = "",
) -> Dataset:
    """Draw n i.i.d. rows (Y, X)ᵀ = (I − B)⁻¹(ε + (0, A)ᵀ).

    ε ~ N(0, noise.cov) and A ~ N(0, shift.cov) independently; correlation is
    induced through the PSD square root. Deterministic in (inputs, seed).
    """
    if n < 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    p = s.p
    if noise.dim != p + 1 or shift.dim != p:
        raise InvalidInput(
            f"covariance sizes ({noise.dim}, {shift.dim}) do not match p={p}"
        )
    k = s.reduced_form()
    rng = make_rng(seed)

    # ε first, then A: the draw order is part of the reproducibility contract
    eps = rng.standard_normal((n, p + 1)) @ psd_sqrt(noise.cov).entries
    shocks = rng.standard_normal((n, p)) @ psd_sqrt(shift.cov).entries
    eps[:, 1:] += shocks
    joint = eps @ k.T

    log.debug("sem_sampled", n=n, p=p, label=label)
    return Dataset(joint[:, 1:], joint[:, 0], label)


def sample_pair(
    s: SemStructure,
    noise: NoiseSpec,
    shift: ShiftSpec,
    n_e: int,
    n_o: int,
    seed: int,
) -> EnvPair:
    """Observational (A ≡ 0) and shifted samples from independent child seeds."""
    return EnvPair(
        obs=sample_sem(s, noise, ShiftSpec.zero(s.p), n_o, derive_seed(seed, 0), "obs"),
        shifted=sample_sem(s, noise, shift, n_e, derive_seed(seed, 1), "shift"),
    )
