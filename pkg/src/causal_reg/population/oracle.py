"""Exact population quantities of a simulated SEM and a Monte Carlo cross-check.

Everything here is closed form in the structure and the two covariances.
With K = (I − B)⁻¹ split into the Y row K_Y and the X rows K_X, the
environment with shift scale s has second moments

    E[(Y, X)(Y, X)ᵀ] = K (Σ + s·diag(0, C_A)) Kᵀ,

so the observational environment is s = 0, the training shift s = 1 and
the worst case over C_{1+τ} is s = 1 + τ.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from causal_reg.errors import InvalidInput, PreconditionError
from causal_reg.estimation.lambdas import INF, LambdaValue
from causal_reg.linalg import SymMatrix, pinv_psd, solve_spd
from causal_reg.rng import derive_seed
from causal_reg.sem import NoiseSpec, SemStructure, ShiftSpec, sample_sem, validate_structure

log = structlog.get_logger("population")

MIN_MONTE_CARLO = 10_000
DEFAULT_CHUNK = 100_000


@dataclass(frozen=True, eq=False)
class PopulationQuantities:
    """Population moments of the observational/shifted pair."""

    structure: SemStructure
    noise: NoiseSpec
    shift: ShiftSpec
    k: NDArray[np.float64]
    m: NDArray[np.float64]
    g_diff: SymMatrix
    g_sum: SymMatrix
    z_diff: NDArray[np.float64]
    z_plus: NDArray[np.float64]
    beta_ols: NDArray[np.float64]

    @property
    def p(self) -> int:
        return self.m.shape[0]

    @property
    def beta_pa(self) -> NDArray[np.float64]:
        return np.array(self.structure.beta_pa)

    @property
    def identity_covariances(self) -> bool:
        return self.noise.is_identity() and self.shift.is_identity()

    def shift_block(self, scale: float = 1.0) -> NDArray[np.float64]:
        """Σ + scale·diag(0, C_A), the covariance of ε + (0, A)."""
        d = np.array(self.noise.cov, dtype=np.float64)
        d[1:, 1:] += scale * self.shift.cov
        return d

    def x_second_moment(self, scale: float = 1.0) -> NDArray[np.float64]:
        """E[XXᵀ] in the environment with shift scale *scale*."""
        kx = self.k[1:, :]
        return kx @ self.shift_block(scale) @ kx.T

    def y_variance(self, scale: float = 1.0) -> float:
        ky = self.k[0, :]
        return float(ky @ self.shift_block(scale) @ ky)


def compute_population(
    structure: SemStructure,
    noise: NoiseSpec | None = None,
    shift: ShiftSpec | None = None,
) -> PopulationQuantities:
    """M, Gdiff = M·C_A·Mᵀ, Gsum, Zdiff, Z⁺ and βols = Gsum⁻¹Z⁺.

    Identity covariances are assumed for whichever of *noise* and *shift*
    is omitted.
    """
    validate_structure(structure)
    p = structure.p
    noise = noise if noise is not None else NoiseSpec.identity(p)
    shift = shift if shift is not None else ShiftSpec.identity(p)
    if noise.dim != p + 1 or shift.dim != p:
        raise InvalidInput(f"covariance sizes ({noise.dim}, {shift.dim}) do not match p={p}")

    k = structure.reduced_form()
    kx, ky = k[1:, :], k[0, :]
    # lower-right block of (I − B)⁻¹ is ((I − Bx) − βch·βpaᵀ)⁻¹
    m = k[1:, 1:].copy()

    shift_only = np.zeros((p + 1, p + 1))
    shift_only[1:, 1:] = shift.cov
    pooled = 2.0 * noise.cov + shift_only

    g_diff = SymMatrix.from_array(kx @ shift_only @ kx.T)
    g_sum = SymMatrix.from_array(kx @ pooled @ kx.T)
    z_diff = kx @ shift_only @ ky
    z_plus = kx @ pooled @ ky
    beta_ols = solve_spd(g_sum, z_plus)

    log.debug("population_computed", p=p)
    return PopulationQuantities(
        structure=structure,
        noise=noise,
        shift=shift,
        k=k,
        m=m,
        g_diff=g_diff,
        g_sum=g_sum,
        z_diff=z_diff,
        z_plus=z_plus,
        beta_ols=beta_ols,
    )


def _beta(pq: PopulationQuantities, beta: ArrayLike) -> NDArray[np.float64]:
    b = np.asarray(beta, dtype=np.float64).reshape(-1)
    if b.shape != (pq.p,):
        raise InvalidInput(f"beta has length {b.shape[0]}, expected {pq.p}")
    return b


def population_risk(pq: PopulationQuantities, beta: ArrayLike, shift_scale: float = 1.0) -> float:
    """E[(Y − βᵀX)²] under shift covariance shift_scale·C_A."""
    u = pq.k[0, :] - _beta(pq, beta) @ pq.k[1:, :]
    return float(u @ pq.shift_block(shift_scale) @ u)


def population_rsum(pq: PopulationQuantities, beta: ArrayLike) -> float:
    return population_risk(pq, beta, 1.0) + population_risk(pq, beta, 0.0)


def population_rdiff(pq: PopulationQuantities, beta: ArrayLike) -> float:
    """(β − βpa)ᵀ Gdiff (β − βpa)."""
    d = _beta(pq, beta) - pq.beta_pa
    return max(float(d @ pq.g_diff.entries @ d), 0.0)


def algorithm_worst_risk(pq: PopulationQuantities, beta: ArrayLike, tau: float) -> float:
    """Worst risk over C_{1+τ} from the identity-covariance closed form.

    With v = Mᵀβ, h = Mᵀβpa and c = (βchβchᵀ + 3/2·I)⁻¹βch, the pooled risk
    is 2(βchᵀ(v − h − c))² + 3‖v − h − c‖² + 2 − 2βchᵀc and the risk
    difference is ‖v − h‖².
    """
    if not pq.identity_covariances:
        raise PreconditionError("closed-form worst risk needs identity noise and shift covariances")
    if tau < 0:
        raise InvalidInput(f"tau must be nonneg, got {tau}")
    b = _beta(pq, beta)
    beta_ch = np.array(pq.structure.beta_ch)

    h = pq.m.T @ pq.beta_pa
    c = np.linalg.solve(np.outer(beta_ch, beta_ch) + 1.5 * np.eye(pq.p), beta_ch)
    w = h + c
    v = pq.m.T @ b

    r = v - w
    r_sum = 2.0 * float(beta_ch @ r) ** 2 + 3.0 * float(r @ r) + 2.0 - 2.0 * float(beta_ch @ c)
    r_diff = float((v - h) @ (v - h))
    return 0.5 * r_sum + 0.5 * (1.0 + 2.0 * tau) * r_diff


def population_worst_risk(pq: PopulationQuantities, beta: ArrayLike, tau: float) -> float:
    """½Rsum(β) + ((1+2τ)/2)·Rdiff(β).

    Identity covariances use the closed form; anything else goes through the
    second-moment expansion at shift scale 1 + τ.
    """
    if pq.identity_covariances:
        return algorithm_worst_risk(pq, beta, tau)
    if tau < 0:
        raise InvalidInput(f"tau must be nonneg, got {tau}")
    return population_risk(pq, beta, 1.0 + tau)


def population_beta_lambda(pq: PopulationQuantities, lam: LambdaValue) -> NDArray[np.float64]:
    """(Gsum + λGdiff)⁻¹(Z⁺ + λZdiff); Gdiff^g·Zdiff at λ = ∞."""
    if lam is INF:
        return pinv_psd(pq.g_diff).entries @ pq.z_diff
    lam = float(lam)
    system = SymMatrix.from_array(pq.g_sum.entries + lam * pq.g_diff.entries)
    return solve_spd(system, pq.z_plus + lam * pq.z_diff)


def monte_carlo_worst_risk(
    structure: SemStructure,
    noise: NoiseSpec,
    shift: ShiftSpec,
    beta: ArrayLike,
    tau: float,
    n_mc: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK,
) -> float:
    """Brute-force E[(Y − βᵀX)²] with the shift covariance scaled by 1 + τ.

    Samples are drawn in chunks seeded from (seed, chunk index) and summed in
    chunk order, so the value does not depend on chunk scheduling.
    """
    if n_mc < MIN_MONTE_CARLO:
        raise InvalidInput(f"n_mc must be >= {MIN_MONTE_CARLO}, got {n_mc}")
    if tau < 0:
        raise InvalidInput(f"tau must be nonneg, got {tau}")
    b = np.asarray(beta, dtype=np.float64).reshape(-1)
    worst = shift.scaled(1.0 + tau)

    total = 0.0
    done = 0
    chunk = 0
    while done < n_mc:
        size = min(chunk_size, n_mc - done)
        d = sample_sem(structure, noise, worst, size, derive_seed(seed, chunk))
        r = d.y - d.x @ b
        total += float(r @ r)
        done += size
        chunk += 1

    value = total / n_mc
    log.debug("monte_carlo_worst_risk", n_mc=n_mc, chunks=chunk, tau=tau, value=value)
    return value
